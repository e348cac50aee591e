"""Truncation towers: Betti growth across levels and the empirical lambda.

A module pattern names a module by data that only mentions variables of
bounded index, so it makes sense over every truncation ``R_N`` of a ring
pattern with ``N`` at least its base level.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .core import GradedRing, Monomial, PatternError, RingPattern
from .modules import (
    FPModule,
    GradedFreeModule,
    HomMatrix,
    direct_sum,
    free_module,
    ideal_module,
    quotient_module,
    with_multidegrees,
)
from .resolution import BettiTable, Resolution, betti_table, extend, minimal_resolution

KINDS = ("ideal", "quotient", "free", "matrix", "sum", "kernel", "cover")


@dataclass(frozen=True)
class ModulePattern:
    kind: str
    gen: Monomial | None = None
    shifts: tuple = (0,)
    shifts_source: tuple = ()
    shifts_target: tuple = ()
    entries: tuple = ()  # rows of polynomial strings, target x source
    parts: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown module kind {self.kind!r}")
        if self.kind in ("ideal", "quotient") and self.gen is None:
            raise ValueError(f"{self.kind} needs a generator")
        if self.kind == "sum" and len(self.parts) < 2:
            raise ValueError("sum needs at least two parts")
        if self.kind in ("kernel", "cover") and len(self.parts) != 1:
            raise ValueError(f"{self.kind} wraps exactly one module")

    @property
    def base_level(self) -> int:
        idx = [1]
        if self.gen is not None:
            idx.extend(v.index for v in self.gen.variables)
        for row in self.entries:
            for text in row:
                idx.extend(int(m) for m in re.findall(r"[A-Za-z_]+(\d+)", text))
        idx.extend(p.base_level for p in self.parts)
        return max(idx)

    def label(self) -> str:
        if self.kind in ("ideal", "quotient"):
            return f"{self.kind}({self.gen})"
        if self.kind == "free":
            return "R" if self.shifts == (0,) else "R(" + ",".join(str(-a) for a in self.shifts) + ")"
        if self.kind == "matrix":
            return "coker[" + ";".join(",".join(r) for r in self.entries) + "]"
        if self.kind == "sum":
            return "(" + " + ".join(p.label() for p in self.parts) + ")"
        if self.kind == "kernel":
            return f"syz({self.parts[0].label()})"
        return f"cover({self.parts[0].label()})"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.gen is not None:
            out["gen"] = str(self.gen)
        if self.kind == "free":
            out["shifts"] = list(self.shifts)
        if self.kind == "matrix":
            out["shifts_source"] = list(self.shifts_source)
            out["shifts_target"] = list(self.shifts_target)
            out["entries"] = [list(r) for r in self.entries]
        if self.kind == "sum":
            out["parts"] = [p.to_json() for p in self.parts]
        if self.kind in ("kernel", "cover"):
            out["of"] = self.parts[0].to_json()
        return out

    def instantiate(self, ring_pattern: RingPattern, level: int, cap: int = 8) -> FPModule:
        return instantiate(self, ring_pattern, level, cap).module


def ideal(u) -> ModulePattern:
    return ModulePattern("ideal", gen=Monomial.parse(u) if isinstance(u, str) else u)


def quotient(u) -> ModulePattern:
    return ModulePattern("quotient", gen=Monomial.parse(u) if isinstance(u, str) else u)


def free(shifts=(0,)) -> ModulePattern:
    return ModulePattern("free", shifts=tuple(shifts))


def msum(*parts) -> ModulePattern:
    return ModulePattern("sum", parts=tuple(parts))


def syzygy(m: ModulePattern) -> ModulePattern:
    return ModulePattern("kernel", parts=(m,))


def cover(m: ModulePattern) -> ModulePattern:
    return ModulePattern("cover", parts=(m,))


@dataclass
class Instance:
    module: FPModule
    complete: bool = True  # False when the presentation itself was cut at the cap
    extra: dict = dc_field(default_factory=dict)


def instantiate(mp: ModulePattern, rp: RingPattern, level: int, cap: int) -> Instance:
    if level < mp.base_level:
        raise PatternError(f"{mp.label()} needs level >= {mp.base_level}, got {level}", "bad-level")
    key = ("inst", mp, level, cap)
    cache = rp._cache
    got = cache.get(key)
    if got is not None:
        return got
    ring = rp.truncate(level)
    if mp.kind == "ideal":
        inst = Instance(ideal_module(ring, mp.gen))
    elif mp.kind == "quotient":
        inst = Instance(quotient_module(ring, mp.gen))
    elif mp.kind == "free":
        inst = Instance(free_module(ring, mp.shifts))
    elif mp.kind == "matrix":
        from .io import parse_poly

        src = GradedFreeModule(tuple(mp.shifts_source))
        tgt = GradedFreeModule(tuple(mp.shifts_target))
        entries = {}
        for r, row in enumerate(mp.entries):
            for c, text in enumerate(row):
                poly = parse_poly(ring, text, where=f"entries[{r}][{c}]")
                if poly:
                    entries[(r, c)] = poly
        inst = Instance(FPModule(ring, with_multidegrees(HomMatrix(ring, src, tgt, entries)), ("matrix",)))
    elif mp.kind == "sum":
        parts = [instantiate(p, rp, level, cap) for p in mp.parts]
        mod = parts[0].module
        for p in parts[1:]:
            mod = direct_sum(mod, p.module)
        inst = Instance(mod, all(p.complete for p in parts))
    else:
        inner = instantiate(mp.parts[0], rp, level, cap)
        res = minimal_resolution(inner.module, 2, cap)
        d1 = res.differentials[0] if res.differentials else HomMatrix(ring, GradedFreeModule((), ()), res.base, {})
        if mp.kind == "cover":
            zero = HomMatrix(ring, GradedFreeModule((), ()), res.base, {})
            inst = Instance(FPModule(ring, zero, ("cover",), minimal=True), inner.complete, {"d1": d1})
        else:
            if len(res.differentials) >= 2:
                d2 = res.differentials[1]
            else:
                d2 = HomMatrix(ring, GradedFreeModule((), ()), d1.source, {})
            ok = inner.complete and res.complete[-1]
            inst = Instance(FPModule(ring, d2, ("kernel",), minimal=True), ok, {"d1": d1})
    cache[key] = inst
    return inst


# ---------------------------------------------------------------------------
# towers


@dataclass
class TowerReport:
    ring_name: str
    module: ModulePattern
    levels: tuple
    n: int
    cap: int
    window: int
    tables: list  # one BettiTable per level
    stability: list  # per step: "stable" | "unstable" | "incomplete" | "not-computed"
    growth: dict  # step -> ranks across levels, for non-stable steps

    def table(self, level: int) -> BettiTable:
        return self.tables[self.levels.index(level)]

    def ranks(self, step: int) -> list:
        return [t.steps[step].rank if step < len(t.steps) else None for t in self.tables]

    def to_json(self) -> dict:
        return {
            "ring": self.ring_name,
            "module": self.module.label(),
            "steps": self.n,
            "cap": self.cap,
            "window": self.window,
            "levels": [{"level": lv, **t.to_json(), "stopped": t.stopped} for lv, t in zip(self.levels, self.tables)],
            "stability": list(self.stability),
            "growth": {str(k): v for k, v in sorted(self.growth.items())},
        }


def _step_status(tables: list, step: int, window: int) -> str:
    tail = tables[-window:]
    cells = [t.steps[step] if step < len(t.steps) else None for t in tail]
    if any(c is None for c in cells):
        return "incomplete" if any(t.stopped for t in tail) else "not-computed"
    if not all(c.complete for c in cells):
        return "incomplete"
    sigs = {c.signature() for c in cells}
    return "stable" if len(sigs) == 1 else "unstable"


def tower_betti(
    ring_pattern: RingPattern,
    module_pattern: ModulePattern,
    n: int,
    levels,
    cap: int,
    window: int = 3,
    stop_at_unstable: bool = True,
) -> TowerReport:
    """Resolve the module at every level, one homological step at a time.

    Once a step is unstable across the trailing window the higher steps
    cannot change the verdict; with ``stop_at_unstable`` they are skipped.
    """
    levels = tuple(levels)
    if not levels:
        raise ValueError("empty level range")
    if list(levels) != sorted(set(levels)):
        raise ValueError("levels must be strictly ascending")
    if levels[0] < module_pattern.base_level:
        raise ValueError(f"level {levels[0]} below base level {module_pattern.base_level}")
    resolutions: list[Resolution] = []
    cut = []
    for lv in levels:
        inst = instantiate(module_pattern, ring_pattern, lv, cap)
        res = minimal_resolution(inst.module, 0, cap)
        resolutions.append(res)
        cut.append(not inst.complete)
    stability: list = []
    w = min(window, len(levels))
    for step in range(n + 1):
        if step:
            for res, was_cut in zip(resolutions, cut):
                extend(res, step)
                if was_cut and step == 1 and res.length >= 1:
                    # syzygy presentations cut at the cap lose relations above it
                    res.complete[1] = False
                    res.stopped = res.stopped or "cap-incomplete at step 1"
        tables = [betti_table(r) for r in resolutions]
        status = _step_status(tables, step, w)
        stability.append(status)
        if status != "stable" and stop_at_unstable:
            break
    tables = [betti_table(r) for r in resolutions]
    stability += ["not-computed"] * (n + 1 - len(stability))
    growth = {}
    for step, st in enumerate(stability):
        if st in ("unstable", "incomplete"):
            growth[step] = [t.steps[step].rank if step < len(t.steps) else None for t in tables]
    return TowerReport(ring_pattern.name, module_pattern, levels, n, cap, window, tables, stability, growth)


@dataclass(frozen=True)
class LambdaVerdict:
    lambda_hat: int | None  # None means "at least n_max"
    n_max: int
    window: int
    levels: tuple
    first_unstable: int | None = None
    growth: tuple = ()
    incomplete: bool = False  # the first non-stable step was cut by the cap

    @property
    def saturated(self) -> bool:
        return self.lambda_hat is None

    @property
    def value(self) -> int:
        """Sentinel counts as n_max in arithmetic."""
        return self.n_max if self.lambda_hat is None else self.lambda_hat

    def __str__(self):
        return f">= {self.n_max}" if self.lambda_hat is None else str(self.lambda_hat)

    def to_json(self) -> dict:
        out = {
            "lambda_hat": str(self),
            "window": self.window,
            "levels": [self.levels[0], self.levels[-1]],
            "incomplete": self.incomplete,
        }
        if self.first_unstable is None:
            out["evidence"] = "all steps stable"
        else:
            out["evidence"] = {"first_unstable_step": self.first_unstable, "growth": list(self.growth)}
        return out


def empirical_lambda(report: TowerReport, window: int | None = None) -> LambdaVerdict:
    w = report.window if window is None else window
    if w < 2:
        raise ValueError("window must be >= 2")
    if len(report.levels) < w:
        raise ValueError(f"report covers {len(report.levels)} levels, window needs {w}")
    if w == report.window:
        status = list(report.stability)
    else:
        status = [_step_status(report.tables, s, w) for s in range(report.n + 1)]
    for step, st in enumerate(status):
        if st != "stable":
            ranks = tuple(report.ranks(step)[-w:])
            return LambdaVerdict(step - 1, report.n, w, report.levels, step, ranks, st != "unstable")
    return LambdaVerdict(None, report.n, w, report.levels)


# ---------------------------------------------------------------------------
# short exact sequences


@dataclass(frozen=True)
class SES:
    """0 -> a -> b -> c -> 0 with a recipe for the maps at every level."""

    kind: str
    a: ModulePattern
    b: ModulePattern
    c: ModulePattern

    def label(self) -> str:
        return f"0 -> {self.a.label()} -> {self.b.label()} -> {self.c.label()} -> 0"

    def maps(self, rp: RingPattern, level: int, cap: int):
        """(f, g, A, B, C) with f: F0(A) -> F0(B), g: F0(B) -> F0(C)."""
        ring = rp.truncate(level)
        one = {0: ring.field(1)}
        if self.kind == "ideal_seq":
            a = instantiate(self.a, rp, level, cap).module
            b = instantiate(self.b, rp, level, cap).module
            c = instantiate(self.c, rp, level, cap).module
            f = HomMatrix(ring, a.generators, b.generators, {(0, 0): {ring.pack(self.a.gen): ring.field(1)}})
            g = HomMatrix(ring, b.generators, c.generators, {(0, 0): one})
            return f, g, a, b, c
        if self.kind == "direct_sum":
            a = instantiate(self.a, rp, level, cap).module
            c = instantiate(self.c, rp, level, cap).module
            b = instantiate(self.b, rp, level, cap).module
            ra, rc = a.generators.rank, c.generators.rank
            f = HomMatrix(ring, a.generators, b.generators, {(i, i): one for i in range(ra)})
            g = HomMatrix(ring, b.generators, c.generators, {(i, ra + i): one for i in range(rc)})
            return f, g, a, b, c
        # from_kernel
        ai = instantiate(self.a, rp, level, cap)
        bi = instantiate(self.b, rp, level, cap)
        d1 = ai.extra["d1"]
        a = ai.module
        b = bi.module
        c = FPModule(ring, d1, ("presented",))
        f = HomMatrix(ring, a.generators, b.generators, d1.entries)
        g = HomMatrix(ring, b.generators, c.generators, {(i, i): one for i in range(b.generators.rank)})
        return f, g, a, b, c

    def exactness_defects(self, rp: RingPattern, level: int, cap: int) -> list:
        from .homalg import check_exact

        f, g, a, b, c = self.maps(rp, level, cap)
        return check_exact(f, g, a, b, c, cap)


def build_ses(kind: str, *args) -> SES:
    """``from_kernel(M)``, ``ideal_seq(u)`` or ``direct_sum(A, C)``."""
    if kind == "from_kernel":
        (m,) = args
        return SES(kind, syzygy(m), cover(m), m)
    if kind == "ideal_seq":
        (u,) = args
        if isinstance(u, str):
            u = Monomial.parse(u)
        return SES(kind, ideal(u), free(), quotient(u))
    if kind == "direct_sum":
        a, c = args
        return SES(kind, a, msum(a, c), c)
    raise ValueError(f"unknown sequence kind {kind!r}")


def check_ses(ses: SES, rp: RingPattern, levels, cap: int) -> dict:
    """Degrees where exactness fails, per level (empty dict when exact)."""
    out = {}
    for lv in levels:
        bad = ses.exactness_defects(rp, lv, cap)
        if bad:
            out[lv] = bad
    return out
