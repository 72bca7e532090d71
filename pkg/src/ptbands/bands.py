"""Band edges and band structure from the Bloch discriminant.

Edges are the roots of D(E) = +1 and D(E) = -1.  A uniform energy grid is
refined by interval bisection, bracketed roots are polished with Brent's
method, and sampled local extrema of D are optimized so that gaps (or bands)
that open and close between two grid points are not lost.
"""
from dataclasses import dataclass, field
import math
import warnings
from typing import List

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .dispersion import DiscriminantSample, discriminant
from .errors import DegenerateBasisRepaired, IncompleteScan
from .susy import bound_spectrum

EDGE_PLUS = "D=+1"
EDGE_MINUS = "D=-1"
EDGE_CUT = "cut"

DEFAULT_TOL = 1e-10
DEFAULT_DEPTH = 12
TOUCH_TOL = 1e-9  # |D| excursions beyond 1 smaller than this are closed gaps
JUMP = 0.5
STEEP_CAP = 2.0


@dataclass
class Band:
    e_lo: float
    e_hi: float
    edge_types: tuple
    samples: list = field(default_factory=list)  # (E, gamma)

    @property
    def width(self):
        return self.e_hi - self.e_lo

    @property
    def center(self):
        return 0.5 * (self.e_lo + self.e_hi)


@dataclass
class BandStructure:
    params: object
    negative_bands: List[Band]
    positive_bands: List[Band]
    e_cutoff: float
    scan: dict = field(default_factory=dict)
    incomplete: bool = False

    @property
    def bands(self):
        return self.negative_bands + self.positive_bands

    @property
    def gaps(self):
        """(lower, upper) energy of every gap between consecutive bands."""
        b = self.bands
        return [(lo.e_hi, hi.e_lo) for lo, hi in zip(b[:-1], b[1:])]

    @property
    def first_gap(self):
        g = self.gaps
        return g[0] if g else None


def _D(params, energy):
    # seeds sit on the factorization energies on purpose; the repair is expected there
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisRepaired)
        return discriminant(params, energy).D


def _flag(d_lo, d_hi):
    inside_lo, inside_hi = abs(d_lo) <= 1.0, abs(d_hi) <= 1.0
    if inside_lo != inside_hi:
        return True
    if d_lo * d_hi < 0 and not inside_lo:
        return True  # a whole band sits inside the interval
    return abs(d_hi - d_lo) > JUMP and min(abs(d_lo), abs(d_hi)) <= STEEP_CAP


def scan_discriminant(params, e_min, e_max, n, seeds=(), max_depth=DEFAULT_DEPTH, _depths=None):
    """Discriminant on a uniform grid (plus seeds), bisected where it changes fast."""
    if not e_min < e_max:
        raise ValueError("need e_min < e_max")
    if n < 2:
        raise ValueError("need n >= 2")
    grid = set(np.linspace(e_min, e_max, n).tolist())
    grid.update(float(s) for s in seeds if e_min < s < e_max)
    grid = sorted(grid)
    grid[0], grid[-1] = float(e_min), float(e_max)
    values = [_D(params, e) for e in grid]

    es, ds, depths = [grid[0]], [values[0]], []

    def refine(lo, d_lo, hi, d_hi, depth):
        if depth < max_depth and _flag(d_lo, d_hi):
            mid = 0.5 * (lo + hi)
            d_mid = _D(params, mid)
            refine(lo, d_lo, mid, d_mid, depth + 1)
            refine(mid, d_mid, hi, d_hi, depth + 1)
        else:
            es.append(hi)
            ds.append(d_hi)
            depths.append(depth)

    for i in range(len(grid) - 1):
        refine(grid[i], values[i], grid[i + 1], values[i + 1], 0)
    if _depths is not None:
        _depths.extend(depths)
    return [DiscriminantSample(e, d) for e, d in zip(es, ds)]


def _root(params, lo, hi, level, tol):
    xtol = tol * max(1.0, abs(lo), abs(hi))
    return brentq(lambda e: _D(params, e) - level, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def _extremum(params, lo, hi, sign, tol):
    # sign=+1 looks for a maximum of D, -1 for a minimum
    res = minimize_scalar(lambda e: -sign * _D(params, e), bounds=(lo, hi), method="bounded",
                          options={"xatol": tol * max(1.0, abs(lo), abs(hi))})
    return float(res.x), -sign * float(res.fun), bool(res.success)


def _edges(params, es, ds, tol, max_depth, depths):
    """Sorted list of (energy, level) band-edge roots inside [es[0], es[-1]]."""
    roots = []
    unresolved = []
    for i in range(len(es) - 1):
        for level in (1.0, -1.0):
            g_lo, g_hi = ds[i] - level, ds[i + 1] - level
            if g_lo == 0.0:
                if i > 0:
                    roots.append((es[i], level))
            elif g_lo * g_hi < 0:
                roots.append((_root(params, es[i], es[i + 1], level, tol), level))
    # local extrema of the samples can hide a crossing between grid points
    for i in range(1, len(es) - 1):
        d_prev, d, d_next = ds[i - 1], ds[i], ds[i + 1]
        if d > d_prev and d >= d_next:
            sign = 1
        elif d < d_prev and d <= d_next:
            sign = -1
        else:
            continue
        x_ext, d_ext, ok = _extremum(params, es[i - 1], es[i + 1], sign, tol)
        if not ok:
            unresolved.append(es[i])
            continue
        sampled = [d_prev, d, d_next]
        for level in (1.0, -1.0):
            crosses_sampled = any((s0 - level) * (s1 - level) < 0 for s0, s1 in zip(sampled, sampled[1:]))
            if crosses_sampled or abs(d_ext - level) <= TOUCH_TOL:
                continue
            if (d_ext - level) * (d - level) < 0:
                if (d_prev - level) * (d_ext - level) < 0:
                    roots.append((_root(params, es[i - 1], x_ext, level, tol), level))
                if (d_next - level) * (d_ext - level) < 0:
                    roots.append((_root(params, x_ext, es[i + 1], level, tol), level))
        if depths is not None:
            # an extremum sitting in a still-steep interval at full depth is not trustworthy
            for j in (i - 1, i):
                if depths[j] >= max_depth and _flag(ds[j], ds[j + 1]) and abs(abs(d_ext) - 1.0) < JUMP:
                    if not any(es[j] <= r <= es[j + 1] for r, _ in roots):
                        unresolved.append(es[j])
    roots.sort()
    return roots, unresolved


def _gamma(d, a):
    return math.acos(min(1.0, max(-1.0, d))) / (2.0 * a)


def _sample_band(params, band, n_samples):
    a = params.a
    out = []
    for j, e in enumerate(np.linspace(band.e_lo, band.e_hi, n_samples)):
        e = float(e)
        kind = band.edge_types[0] if j == 0 else band.edge_types[1] if j == n_samples - 1 else None
        if kind == EDGE_PLUS:
            g = 0.0  # exact at an edge by construction
        elif kind == EDGE_MINUS:
            g = math.pi / (2.0 * a)
        else:
            g = _gamma(_D(params, e), a)
        out.append((e, g))
    return out


def find_band_edges(params, e_min, e_max, tol=DEFAULT_TOL, n=2000, seeds=(), max_depth=DEFAULT_DEPTH,
                    n_samples=17, strict=True):
    """Allowed bands inside [e_min, e_max], sorted by energy.

    Bands cut by the range limits get an edge type of ``"cut"``.  When part of
    the scan could not be resolved an IncompleteScan carrying the bands is
    raised (``strict=False`` returns them instead, with the flag attached).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    depths = []
    samples = scan_discriminant(params, e_min, e_max, n, seeds, max_depth, _depths=depths)
    es = [s.E for s in samples]
    ds = [s.D for s in samples]
    roots, unresolved = _edges(params, es, ds, tol, max_depth, depths)

    # boundaries: [e_min, r1, r2, ..., e_max]; classify each segment by its midpoint
    cuts = [(es[0], None)] + roots + [(es[-1], None)]
    segments = []
    for (lo, lv_lo), (hi, lv_hi) in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        d_mid = _D(params, 0.5 * (lo + hi))
        segments.append([lo, hi, lv_lo, lv_hi, abs(d_mid) <= 1.0, abs(d_mid) - 1.0])

    # a gap whose excursion never clears TOUCH_TOL is a touching point, not a gap
    for seg in segments:
        if not seg[4]:
            inner = [abs(d) - 1.0 for e, d in zip(es, ds) if seg[0] < e < seg[1]]
            if max([seg[5]] + inner) < TOUCH_TOL:
                seg[4] = True
    merged = []
    for seg in segments:
        if merged and merged[-1][4] and seg[4]:
            merged[-1][1], merged[-1][3] = seg[1], seg[3]
        else:
            merged.append(list(seg))

    def edge_type(level):
        if level is None:
            return EDGE_CUT
        return EDGE_PLUS if level > 0 else EDGE_MINUS

    bands = []
    for lo, hi, lv_lo, lv_hi, allowed, _ in merged:
        if allowed:
            band = Band(float(lo), float(hi), (edge_type(lv_lo), edge_type(lv_hi)))
            band.samples = _sample_band(params, band, n_samples)
            bands.append(band)
    if unresolved:
        msg = (f"{len(unresolved)} region(s) near E={unresolved[:3]} could not be resolved at depth "
               f"{max_depth}; a band narrower than the grid may be missing")
        if strict:
            raise IncompleteScan(msg, result=bands)
    return bands


def _stitch(neg, pos):
    # bands cut at E = 0 by both scans are one band
    if neg and pos and neg[-1].edge_types[1] == EDGE_CUT and pos[0].edge_types[0] == EDGE_CUT \
            and neg[-1].e_hi == pos[0].e_lo == 0.0:
        lo, hi = neg.pop(), pos.pop(0)
        joined = Band(lo.e_lo, hi.e_hi, (lo.edge_types[0], hi.edge_types[1]),
                      lo.samples + hi.samples[1:])
        return neg, pos, joined
    return neg, pos, None


def negative_scan_floor(params):
    """Lower end of the E < 0 scan, below every allowed energy."""
    return min(1.5 * min(bound_spectrum(params)), -params.depth)


def negative_seeds(params):
    seeds = []
    for e in bound_spectrum(params):
        for rel in (0.0, 1e-9, 1e-7, 1e-5, 1e-3, 1e-2):
            seeds.extend([e * (1 + rel), e * (1 - rel)])
    return seeds


def bands_in_range(params, e_min, e_max, tol=DEFAULT_TOL, n=2000, max_depth=DEFAULT_DEPTH):
    """Bands in [e_min, e_max] with separate scans below and above E = 0.

    Returns (negative, positive, warnings).  A band straddling E = 0 is
    reassembled and filed by the sign of its centre.
    """
    if not e_min < e_max:
        raise ValueError("need e_min < e_max")
    warnings_ = []

    def run(lo, hi, seeds):
        # keep the sample density of a single scan over the whole range
        n_part = max(2, int(round(n * (hi - lo) / (e_max - e_min))))
        try:
            return find_band_edges(params, lo, hi, tol, n_part, seeds, max_depth, strict=True)
        except IncompleteScan as exc:
            warnings_.append(str(exc))
            return exc.result

    neg = run(e_min, min(e_max, 0.0), negative_seeds(params)) if e_min < 0 else []
    pos = run(max(e_min, 0.0), e_max, ()) if e_max > 0 else []
    neg, pos, joined = _stitch(neg, pos)
    bands = sorted(neg + pos + ([joined] if joined else []), key=lambda b: b.e_lo)
    negative = [b for b in bands if b.center < 0]
    positive = [b for b in bands if b.center >= 0]
    return negative, positive, warnings_


def band_structure(params, e_cutoff, tol=DEFAULT_TOL, n=2000, max_depth=DEFAULT_DEPTH, strict=True):
    """All bands below e_cutoff, starting from an energy below the spectrum."""
    if not e_cutoff > 0:
        raise ValueError("e_cutoff must be positive")
    e_floor = negative_scan_floor(params)
    neg, pos, incomplete = bands_in_range(params, e_floor, float(e_cutoff), tol, n, max_depth)
    result = BandStructure(params, neg, pos, float(e_cutoff),
                           scan={"e_floor": e_floor, "n": n, "tol": tol, "max_depth": max_depth,
                                 "warnings": incomplete},
                           incomplete=bool(incomplete))
    if incomplete and strict:
        raise IncompleteScan("; ".join(incomplete), result=result)
    return result
