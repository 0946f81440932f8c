"""Backend selection for the hot loops.

The compiled ``_ckernel`` extension is used when it was built; otherwise the
pure-Python ``_pykernel`` runs the same algorithm.  Set
``DISCORDANT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernel

PUSH, PULL, OBLIVIOUS = _pykernel.PUSH, _pykernel.PULL, _pykernel.OBLIVIOUS

_c = None
if os.environ.get("DISCORDANT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel as _c  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _c = None

BACKENDS = {"python": _pykernel}
if _c is not None:
    BACKENDS["compiled"] = _c

BACKEND = "compiled" if _c is not None else "python"


def _impl(backend: str | None):
    name = backend or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def run(g, opinions: np.ndarray, proto: int, rng: np.random.Generator, cutoff: int, trace=None, backend: str | None = None) -> tuple[int, int]:
    """Advance ``opinions`` (int8 array, mutated) to consensus or cutoff.

    Returns ``(steps, |K|)``; ``|K| > 0`` means the run hit the cutoff.
    """
    if trace is not None:
        backend = "python"
    steps, left = _impl(backend).run(
        g.indptr, g.indices, g.edge_ids, g.edge_u, g.edge_v, opinions, int(proto), rng.bit_generator, int(cutoff), trace
    )
    return int(steps), int(left)


def cut_ratios(g, eweight: np.ndarray, vweight: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Ratio cut(S)/min(A(S), A(S^c)) for every subset S of ``0..n-2`` (index = bitmask)."""
    out = np.empty(1 << (g.n - 1), dtype=np.float64)
    _impl(backend).cut_ratios(
        g.indptr,
        g.indices,
        np.ascontiguousarray(eweight, dtype=np.float64),
        np.ascontiguousarray(vweight, dtype=np.float64),
        out,
    )
    return out
