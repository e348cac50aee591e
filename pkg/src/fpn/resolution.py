"""Minimal graded free resolutions, Betti tables and Schanuel comparisons."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .modules import (
    FPModule,
    GradedFreeModule,
    HomMatrix,
    KernelGens,
    graded_dims,
    image_echelon,
    kernel_min_gens,
    matrix_from_gens,
    minimal_presentation,
)


@dataclass
class Resolution:
    """F_k -> ... -> F_1 -> F_0 -> M, with differentials[i-1] = d_i.

    ``complete[i]`` tells whether the generators of F_i are known to be all
    of them (always true for i <= 1). ``stopped`` names the reason the
    resolution ends before the requested length, if any.
    """

    module: FPModule
    base: GradedFreeModule
    differentials: list
    kernels: list
    degree_cap: int
    complete: list
    requested_steps: int
    stopped: str | None = None
    padded: tuple = ()
    _kernel_cache: dict = dc_field(default_factory=dict, repr=False)
    _first: HomMatrix | None = dc_field(default=None, repr=False)

    @property
    def ring(self):
        return self.module.ring

    @property
    def length(self) -> int:
        return len(self.differentials)

    def free(self, i: int) -> GradedFreeModule:
        if i == 0:
            return self.base
        return self.differentials[i - 1].source

    @property
    def frees(self) -> list:
        return [self.free(i) for i in range(self.length + 1)]

    def kernel_gens(self, i: int) -> KernelGens:
        """Minimal generators of ker d_i (i >= 1) up to the degree cap."""
        got = self._kernel_cache.get(i)
        if got is None:
            if i < self.length and self.kernels[i] is not None and not self.padded:
                got = self.kernels[i]
            else:
                got = kernel_min_gens(self.differentials[i - 1], self.degree_cap)
            self._kernel_cache[i] = got
        return got

    def is_finite(self) -> bool:
        return self.free(self.length).rank == 0


def _first_step(module: FPModule) -> HomMatrix:
    return minimal_presentation(module)


def minimal_resolution(module: FPModule, n: int, cap: int) -> Resolution:
    """Minimal resolution F_0 .. F_n with every kernel computed up to ``cap``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    d1 = _first_step(module)
    res = Resolution(module, d1.target, [], [None], cap, [True], n)
    res._first = d1
    return extend(res, n)


def extend(res: Resolution, n: int) -> Resolution:
    """Continue a resolution in place up to step n (or until it stops)."""
    res.requested_steps = max(res.requested_steps, n)
    while res.length < n and res.stopped is None:
        i = res.length
        if i == 0:
            res.differentials.append(res._first)
            res.kernels.append(None)
            res.complete.append(True)
            continue  # next free module is F_{i+1} = gens of ker d_i
        last = res.differentials[i - 1]
        if last.source.rank == 0:
            zero = HomMatrix(res.ring, GradedFreeModule((), ()), last.source, {})
            res.differentials.append(zero)
            res.kernels.append(KernelGens([], res.degree_cap, True, "trivial"))
            res.complete.append(True)
            continue
        kg = kernel_min_gens(last, res.degree_cap)
        res.kernels[i] = kg
        res.differentials.append(matrix_from_gens(last.source, res.ring, kg.generators))
        res.kernels.append(None)
        res.complete.append(kg.complete)
        if not kg.complete:
            res.stopped = f"cap-incomplete at step {i + 1}"
    return res


def check_composition(res: Resolution) -> bool:
    """d_i o d_{i+1} == 0 entrywise after reduction."""
    for a, b in zip(res.differentials, res.differentials[1:]):
        if not a.compose(b).is_zero():
            return False
    return True


def is_minimal(res: Resolution) -> bool:
    return not any(d.has_unit_entries() for d in res.differentials)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BettiStep:
    step: int
    rank: int
    shifts: tuple
    complete: bool

    def signature(self):
        return (self.rank, self.shifts)


@dataclass(frozen=True)
class BettiTable:
    steps: tuple
    stopped: str | None = None

    @property
    def ranks(self) -> tuple:
        return tuple(s.rank for s in self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "betti": [
                {"step": s.step, "rank": s.rank, "shifts": list(s.shifts), "complete": s.complete}
                for s in self.steps
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        return cls(tuple(BettiStep(e["step"], e["rank"], tuple(e["shifts"]), e["complete"]) for e in data["betti"]))

    def text(self) -> str:
        """Macaulay2-style table: row r holds beta_{i, i+r}."""
        if not self.steps or all(s.rank == 0 for s in self.steps):
            return "total: " + " ".join(str(s.rank) for s in self.steps)
        counts = [Counter(s.shifts) for s in self.steps]
        rows = sorted({a - s.step for s in self.steps for a in s.shifts})
        width = max(5, max(len(str(s.rank)) for s in self.steps) + 1)
        head = "       " + "".join(str(s.step).rjust(width) for s in self.steps)
        lines = [head, "total: " + "".join(str(s.rank).rjust(width) for s in self.steps)]
        for r in rows:
            cells = []
            for s, cnt in zip(self.steps, counts):
                v = cnt.get(r + s.step, 0)
                cells.append(("." if v == 0 else str(v)).rjust(width))
            lines.append(f"{r:>5}: " + "".join(cells))
        flags = "".join(("" if s.complete else "*").rjust(width) for s in self.steps)
        if flags.strip():
            lines.append("       " + flags + "   (* = cap-incomplete)")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "BettiTable":
        """Inverse of :meth:`text` (the stop reason is not part of the table)."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) == 1:
            ranks = [int(x) for x in lines[0].split(":", 1)[1].split()]
            return cls(tuple(BettiStep(i, r, (), True) for i, r in enumerate(ranks)))
        steps = [int(x) for x in lines[0].split()]
        shifts: dict = {s: [] for s in steps}
        complete = {s: True for s in steps}
        width = (len(lines[0]) - 7) // len(steps)
        for ln in lines[2:]:
            if "cap-incomplete" in ln:
                for k, s in enumerate(steps):
                    if ln[7 + k * width : 7 + (k + 1) * width].strip() == "*":
                        complete[s] = False
                continue
            head, cells = ln.split(":", 1)
            r = int(head)
            for s, cell in zip(steps, cells.split()):
                if cell != ".":
                    shifts[s].extend([r + s] * int(cell))
        return cls(tuple(BettiStep(s, len(shifts[s]), tuple(sorted(shifts[s])), complete[s]) for s in steps))


def betti_table(res: Resolution) -> BettiTable:
    steps = []
    for i, fm in enumerate(res.frees):
        steps.append(BettiStep(i, fm.rank, tuple(sorted(fm.shifts)), res.complete[i]))
    return BettiTable(tuple(steps), res.stopped)


def betti_json(table: BettiTable) -> str:
    return json.dumps(table.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# padding and Schanuel


def _pad_multidegree(ring, frees, a: int):
    # a summand R(-a) can carry any degree-a monomial as multidegree
    if all(f.multidegrees is not None for f in frees) and ring.nvars:
        return a * ring.var_packed()[0]
    return None


def _with_extra(fm: GradedFreeModule, a: int, md) -> GradedFreeModule:
    mds = None
    if fm.multidegrees is not None and md is not None:
        mds = fm.multidegrees + (md,)
    return GradedFreeModule(fm.shifts + (a,), mds)


def padded_resolution(res: Resolution, pad_spec) -> Resolution:
    """Add a summand R(-a) to F_i and F_{i+1}, joined by an identity block.

    The result resolves the same module; padding at the last computed step
    appends one extra step consisting of the identity onto the new summand.
    """
    frees = list(res.frees)
    diffs = [dict(d.entries) for d in res.differentials]
    complete = list(res.complete)
    ring = res.ring
    for i, a in pad_spec:
        if not 0 <= i < len(frees):
            raise ValueError(f"pad step {i} outside resolution of length {len(frees) - 1}")
        md = _pad_multidegree(ring, frees, a)
        if i + 1 == len(frees):
            frees.append(GradedFreeModule((), () if frees[i].multidegrees is not None else None))
            diffs.append({})
            complete.append(False)
        ci = frees[i].rank
        cj = frees[i + 1].rank
        frees[i] = _with_extra(frees[i], a, md)
        frees[i + 1] = _with_extra(frees[i + 1], a, md)
        diffs[i][(ci, cj)] = {0: ring.field(1)}
    mats = [HomMatrix(ring, frees[k + 1], frees[k], diffs[k]) for k in range(len(diffs))]
    return Resolution(
        res.module,
        frees[0],
        mats,
        [None] * (len(mats) + 1),
        res.degree_cap,
        complete,
        max(res.requested_steps, len(mats)),
        res.stopped,
        tuple(res.padded) + tuple(pad_spec),
    )


@dataclass
class SchanuelReport:
    n: int
    cap: int
    free_identity: bool
    kernel_identity: bool
    left_shifts: tuple
    right_shifts: tuple
    kernel_dims: tuple
    mismatched_degrees: tuple = ()

    @property
    def ok(self) -> bool:
        return self.free_identity and self.kernel_identity


def presented_dims(res: Resolution, cap: int) -> list:
    d1 = res.differentials[0] if res.differentials else None
    ring = res.ring
    out = []
    for d in range(cap + 1):
        dim0 = res.base.dim(ring, d)
        out.append(dim0 - (image_echelon(d1, d).rank if d1 is not None else 0))
    return out


def kernel_dims(res: Resolution, i: int, cap: int) -> list:
    """dim (ker d_i)_d for d = 0..cap by rank-nullity (i >= 1)."""
    d = res.differentials[i - 1]
    ring = res.ring
    return [d.source.dim(ring, e) - image_echelon(d, e).rank for e in range(cap + 1)]


def schanuel_check(res1: Resolution, res2: Resolution, n: int, cap: int) -> SchanuelReport:
    """Compare two resolutions of one module through step n.

    With K = ker(F_n -> F_{n-1}) and L = ker(G_n -> G_{n-1}):
    K + G_n + F_{n-1} + G_{n-2} + ...  ==  L + F_n + G_{n-1} + F_{n-2} + ...
    checked as minimal-generator degree multisets (free identity) and as
    degreewise dimensions up to ``cap`` (kernel identity).
    """
    if n < 1 or res1.length < n or res2.length < n:
        raise ValueError("both resolutions must reach step n >= 1")
    if presented_dims(res1, cap) != presented_dims(res2, cap):
        raise ValueError("resolutions present different modules")
    ring = res1.ring
    left: list = []
    right: list = []
    for i in range(n + 1):
        f_side, g_side = res1.free(i).shifts, res2.free(i).shifts
        if (n - i) % 2 == 0:
            left.extend(g_side)
            right.extend(f_side)
        else:
            left.extend(f_side)
            right.extend(g_side)
    k_gens = res1.kernel_gens(n)
    l_gens = res2.kernel_gens(n)
    left_all = sorted(left + k_gens.degrees)
    right_all = sorted(right + l_gens.degrees)
    free_ok = left_all == right_all
    kd = kernel_dims(res1, n, cap)
    ld = kernel_dims(res2, n, cap)
    bad = []
    for d in range(cap + 1):
        lhs = kd[d]
        rhs = ld[d]
        for i in range(n + 1):
            fd, gd = res1.free(i).dim(ring, d), res2.free(i).dim(ring, d)
            if (n - i) % 2 == 0:
                lhs += gd
                rhs += fd
            else:
                lhs += fd
                rhs += gd
        if lhs != rhs:
            bad.append(d)
    return SchanuelReport(n, cap, free_ok, not bad, tuple(left_all), tuple(right_all), tuple(zip(kd, ld)), tuple(bad))
