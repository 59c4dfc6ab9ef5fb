"""Breadth-first branch and bound over boxes ``[alo, ahi] x [xlo, xhi]``.

Boxes are processed one level at a time in fixed-size chunks, so the report
does not depend on how many workers evaluate the chunks.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .report import CERTIFIED, INCONCLUSIVE, REFUTED, VerificationReport

CHUNK = 4096


@dataclass
class Problem:
    """What to bound and how.

    Attributes
    ----------
    name : str
        Region label for the report.
    root : tuple of float
        ``(alo, ahi, xlo, xhi)`` of the starting box.
    bound : callable
        ``bound(alo, ahi, xlo, xhi) -> upper`` (arrays).
    discard : callable or None
        ``discard(alo, ahi, xlo, xhi) -> mask`` of boxes certainly outside
        the target set.
    witness : callable or None
        ``witness(alo, ahi, xlo, xhi) -> (value, a, x)`` plain point values
        used to refute; ``value`` is ``-inf`` where no point is tried.
    split : str
        ``"both"``, ``"a"`` or ``"x"``.
    """

    name: str
    root: tuple
    bound: Callable
    discard: Callable | None = None
    witness: Callable | None = None
    split: str = "both"


def _map_chunks(fn, arrays, workers):
    n = arrays[0].size
    if n <= CHUNK or workers <= 1:
        parts = [fn(*(a[s:s + CHUNK] for a in arrays)) for s in range(0, n, CHUNK)]
    else:
        starts = list(range(0, n, CHUNK))
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda s: fn(*(a[s:s + CHUNK] for a in arrays)), starts))
    if not parts:
        return np.empty(0)
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p) for p in zip(*parts))
    return np.concatenate(parts)


def _split(boxes, mode, wa0, wx0):
    alo, ahi, xlo, xhi = boxes
    if mode == "a":
        on_a = np.ones(alo.size, dtype=bool)
    elif mode == "x":
        on_a = np.zeros(alo.size, dtype=bool)
    else:
        on_a = (ahi - alo) / wa0 >= (xhi - xlo) / wx0
    am = 0.5 * alo + 0.5 * ahi
    xm = 0.5 * xlo + 0.5 * xhi
    left = (alo, np.where(on_a, am, ahi), xlo, np.where(on_a, xhi, xm))
    right = (np.where(on_a, am, alo), ahi, np.where(on_a, xlo, xm), xhi)
    return tuple(np.concatenate((l_, r_)) for l_, r_ in zip(left, right))


def run(problem, threshold=0.0, max_boxes=10**7, max_depth=80, workers=1):
    """Certify ``sup <= threshold`` over the problem's set.

    Returns
    -------
    VerificationReport
        ``certified`` when every box not discarded was accepted;
        ``refuted`` when a plain evaluation exceeded ``max(threshold, 0)``;
        otherwise ``inconclusive``.
    """
    t0 = time.perf_counter()
    alo, ahi, xlo, xhi = (np.array([float(v)]) for v in problem.root)
    wa0 = max(ahi[0] - alo[0], 1e-300)
    wx0 = max(xhi[0] - xlo[0], 1e-300)
    boxes = (alo, ahi, xlo, xhi)
    processed = 0
    depth = 0
    sup = -np.inf
    accepted = 0
    discarded = 0
    status = CERTIFIED
    witness = None
    open_sup = -np.inf

    while boxes[0].size:
        n = boxes[0].size
        if processed + n > max_boxes:
            status = INCONCLUSIVE
            open_sup = np.inf
            break
        processed += n
        keep = np.ones(n, dtype=bool)
        if problem.discard is not None:
            keep = ~_map_chunks(problem.discard, boxes, workers)
            discarded += int(n - keep.sum())
        boxes = tuple(b[keep] for b in boxes)
        if boxes[0].size == 0:
            break
        upper = _map_chunks(problem.bound, boxes, workers)
        ok = upper <= threshold
        if ok.any():
            sup = max(sup, float(upper[ok].max()))
            accepted += int(ok.sum())
        pending = tuple(b[~ok] for b in boxes)
        if pending[0].size == 0:
            break
        if problem.witness is not None:
            val, wa, wx = _map_chunks(problem.witness, pending, workers)
            bad = val > max(threshold, 0.0)
            if bad.any():
                i = int(np.argmax(np.where(bad, val, -np.inf)))
                witness = {"a": float(wa[i]), "x": float(wx[i]), "value": float(val[i])}
                status = REFUTED
                open_sup = float(np.max(upper[~ok]))
                break
        if depth >= max_depth:
            status = INCONCLUSIVE
            open_sup = float(np.max(upper[~ok]))
            break
        boxes = _split(pending, problem.split, wa0, wx0)
        depth += 1

    if status != CERTIFIED:
        sup = max(sup, open_sup)
    return VerificationReport(
        region=problem.name,
        status=status,
        certified_sup=float(sup),
        boxes_processed=int(processed),
        max_depth=int(depth),
        elapsed_ms=round((time.perf_counter() - t0) * 1000.0, 3),
        details={"accepted_boxes": accepted, "discarded_boxes": discarded, "threshold": float(threshold)},
        witness=witness,
    )
