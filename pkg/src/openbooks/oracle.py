"""Exhaustive bigon-move oracle for minimal position.

A configuration realizes one or two paths as an explicit chord diagram
(words need not be reduced, crossing orders along cells are free).
Moves are elementary isotopies that strictly decrease the total
crossing count:

  * spur removal: an adjacent cancelling letter pair whose cell bigon
    is empty,
  * bigon removal: two pair-crossings consecutive along both curves
    whose connecting loop is null-homotopic,
  * half-bigon removal at a shared arc endpoint.

Every maximal move sequence ends in minimal position, so exploring
all sequences both certifies the minimum and cross-checks the
linking-based production numbers.  The greedy variant (fixed scan
order, first move wins) is the deterministic reducer used to produce
bigon-free realizations in production.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import cover
from .realize import CurveSpec, RealizedSystem, canonical_system, stacked_system
from .surface import PathWord, SurfaceError
from .words import cell_of, inv_letter, invert_word, reduce_word, sign_of


class OracleBudgetExceeded(RuntimeError):
    """The exhaustive search hit its state budget; result unknown."""


@dataclass(frozen=True)
class Config:
    curves: Tuple[CurveSpec, ...]
    occ_order: Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]
    point_order: Tuple[Tuple[Tuple[int, int], Tuple[int, ...]], ...]

    @staticmethod
    def of(sysm: RealizedSystem) -> "Config":
        occ = tuple(sorted((c, tuple(v)) for c, v in sysm.occ_order.items()))
        pts = tuple(sorted((pt, tuple(v)) for pt, v in sysm.point_order.items()))
        return Config(tuple(sysm.curves), occ, pts)

    def realize(self, S) -> RealizedSystem:
        return RealizedSystem(S, list(self.curves),
                              {c: list(v) for c, v in self.occ_order},
                              {pt: list(v) for pt, v in self.point_order})


def _total_count(sysm: RealizedSystem) -> int:
    cells = sum(len(c.letters) for c in sysm.curves)
    return 2 * len(sysm.crossings) + cells


def _pair_count(sysm: RealizedSystem) -> int:
    return len(sysm.pair_crossings(0, 1)) if len(sysm.curves) > 1 else 0


# ---------------------------------------------------------------------------
# move generation


def _letters_fwd(spec: CurveSpec, k1: int, k2: int) -> Tuple[int, ...]:
    """Letters crossed travelling forward from chord k1 to chord k2."""
    if spec.kind == "arc":
        assert k1 <= k2
        return spec.letters[k1:k2]
    n = len(spec.letters)
    if k1 <= k2:
        return spec.letters[k1:k2]
    return spec.letters[k1:] + spec.letters[:k2]


def _sorted_pair_crossings(sysm: RealizedSystem, ci: int, cj: int):
    crs = sysm.pair_crossings(ci, cj)
    along_i = sorted(range(len(crs)), key=lambda k: (crs[k].chord_i, crs[k].param_i))
    along_j = sorted(range(len(crs)), key=lambda k: (crs[k].chord_j, crs[k].param_j))
    return crs, along_i, along_j


def _spur_moves(S, cfg: Config, sysm: RealizedSystem):
    moves = []
    for ci, spec in enumerate(sysm.curves):
        letters = spec.letters
        n = len(letters)
        rng = range(n - 1) if spec.kind == "arc" else range(n)
        for t in rng:
            u = (t + 1) % n
            if n < 2 or letters[t] != inv_letter(letters[u]):
                continue
            if spec.kind == "closed" and n == 2 and t == 1:
                continue  # same pair as t == 0
            # spur chord: the one between letters t and u
            chord = t + 1 if spec.kind == "arc" else u
            m1, m2 = sysm.chords[ci][chord]
            if abs(m1 - m2) != 1:
                continue  # not innermost on the cell
            if any((cr.ci == ci and cr.chord_i == chord)
                   or (cr.cj == ci and cr.chord_j == chord)
                   for cr in sysm.crossings):
                continue
            moves.append(("spur", ci, t, u))
    return moves


def _apply_spur(S, cfg: Config, move) -> Optional[Config]:
    _, ci, t, u = move
    spec = cfg.curves[ci]
    n = len(spec.letters)
    if spec.kind == "arc" or t < u:
        new_letters = spec.letters[:t] + spec.letters[u + 1:]
        remap = {}
        for s in range(n):
            if s in (t, u):
                continue
            remap[s] = s - 2 if s > u else s
    else:  # closed wrap pair (n-1, 0)
        new_letters = spec.letters[1:n - 1]
        remap = {s: s - 1 for s in range(1, n - 1)}
    new_curves = list(cfg.curves)
    new_curves[ci] = CurveSpec(spec.kind, new_letters, spec.ends)
    occ = {}
    for cell, entries in cfg.occ_order:
        new_entries = []
        for (cj, s) in entries:
            if cj != ci:
                new_entries.append((cj, s))
            elif s in remap:
                new_entries.append((ci, remap[s]))
        occ[cell] = new_entries
    return Config(tuple(new_curves),
                  tuple(sorted((c, tuple(v)) for c, v in occ.items())),
                  cfg.point_order)


def _bigon_moves(S, cfg: Config, sysm: RealizedSystem):
    if len(sysm.curves) < 2:
        return []
    crs, along_i, along_j = _sorted_pair_crossings(sysm, 0, 1)
    if len(crs) < 2:
        return []
    moves = []
    spec_a, spec_b = sysm.curves[0], sysm.curves[1]
    n_pairs = len(along_i) if spec_a.kind == "closed" else len(along_i) - 1
    for idx in range(n_pairs):
        a = along_i[idx]
        b = along_i[(idx + 1) % len(along_i)]
        if a == b:
            continue
        # consecutive along curve 1 as well?
        ja, jb = along_j.index(a), along_j.index(b)
        if spec_b.kind == "arc":
            if abs(ja - jb) != 1:
                continue
        else:
            if (ja - jb) % len(along_j) not in (1, len(along_j) - 1):
                continue
        ka, kb = crs[a].chord_i, crs[b].chord_i
        sub_a = _letters_fwd(spec_a, ka, kb)
        ma, mb = crs[a].chord_j, crs[b].chord_j
        if spec_b.kind == "arc":
            fwd = (ma, crs[a].param_j) <= (mb, crs[b].param_j)
        else:
            fwd = jb == (ja + 1) % len(along_j)
        if fwd:
            sub_b = _letters_fwd(spec_b, ma, mb)
            occ_range = _occ_range(spec_b, ma, mb)
        else:
            sub_b = invert_word(_letters_fwd(spec_b, mb, ma))
            occ_range = list(reversed(_occ_range(spec_b, mb, ma)))
        if reduce_word(sub_a + invert_word(sub_b)) != ():
            continue
        moves.append(("bigon", a, b, ka, kb, sub_b, tuple(occ_range)))
    return moves


def _occ_range(spec: CurveSpec, k1: int, k2: int) -> List[int]:
    """Letter indices crossed travelling forward from chord k1 to chord k2."""
    n = len(spec.letters)
    if spec.kind == "arc" or k1 <= k2:
        return list(range(k1, k2))
    return list(range(k1, n)) + list(range(k2))


def _apply_bigon(S, cfg: Config, move, side: int) -> Optional[Config]:
    _, a, b, ka, kb, sub_b, occ_src = move
    spec_a, spec_b = cfg.curves[0], cfg.curves[1]
    n = len(spec_a.letters)
    remap = {}
    new_positions = {}  # new letter index of curve 0 -> source letter of curve 1
    if spec_a.kind == "arc":
        new_letters = spec_a.letters[:ka] + sub_b + spec_a.letters[kb:]
        for s in range(ka):
            remap[s] = s
        for i, src in enumerate(occ_src):
            new_positions[ka + i] = src
        for s in range(kb, n):
            remap[s] = s - kb + ka + len(sub_b)
    else:
        kept_range = _occ_range(spec_a, kb, ka)
        new_letters = sub_b + tuple(spec_a.letters[s] for s in kept_range)
        for i, src in enumerate(occ_src):
            new_positions[i] = src
        for j, s in enumerate(kept_range):
            remap[s] = len(sub_b) + j
    new_curves = list(cfg.curves)
    new_curves[0] = CurveSpec(spec_a.kind, tuple(new_letters), spec_a.ends)
    occ = {}
    for cell, entries in cfg.occ_order:
        new_entries = []
        for (cj, s) in entries:
            if cj == 1:
                new_entries.append((1, s))
            elif s in remap:
                new_entries.append((0, remap[s]))
        occ[cell] = new_entries
    # copied strand runs parallel to curve 1, on the chosen geometric side;
    # along a cell the slot offset flips with the crossing direction
    for new_idx, src in new_positions.items():
        cell = cell_of(new_curves[0].letters[new_idx])
        entries = occ.setdefault(cell, [])
        pos = entries.index((1, src))
        after = side * sign_of(spec_b.letters[src]) > 0
        entries.insert(pos + (1 if after else 0), (0, new_idx))
    return Config(tuple(new_curves),
                  tuple(sorted((c, tuple(v)) for c, v in occ.items())),
                  cfg.point_order)


def _half_bigon_moves(S, cfg: Config, sysm: RealizedSystem):
    if len(sysm.curves) != 2:
        return []
    spec_a, spec_b = sysm.curves
    if spec_a.kind != "arc" or spec_b.kind != "arc":
        return []
    shared = set(spec_a.ends) & set(spec_b.ends)
    crs, along_i, along_j = _sorted_pair_crossings(sysm, 0, 1)
    if not crs:
        return []
    moves = []
    for pt in shared:
        fa = along_i[0] if spec_a.ends[0] == pt else along_i[-1]
        fb = along_j[0] if spec_b.ends[0] == pt else along_j[-1]
        if fa != fb:
            continue
        q = crs[fa]
        if spec_a.ends[0] == pt:
            sub_a = spec_a.letters[:q.chord_i]
        else:
            sub_a = invert_word(spec_a.letters[q.chord_i:])
        if spec_b.ends[0] == pt:
            sub_b = spec_b.letters[:q.chord_j]
            occ_src = list(range(q.chord_j))
        else:
            sub_b = invert_word(spec_b.letters[q.chord_j:])
            occ_src = list(reversed(range(q.chord_j, len(spec_b.letters))))
        if reduce_word(sub_a + invert_word(sub_b)) != ():
            continue
        moves.append(("half", pt, q.chord_i, sub_b, tuple(occ_src)))
    return moves


def _apply_half(S, cfg: Config, move, side: int) -> Optional[Config]:
    _, pt, ki, sub_b, occ_src = move
    spec_a = cfg.curves[0]
    at_start = spec_a.ends[0] == pt
    n = len(spec_a.letters)
    if at_start:
        new_letters = sub_b + spec_a.letters[ki:]
        remap = {s: s - ki + len(sub_b) for s in range(ki, n)}
        copied = {i: occ_src[i] for i in range(len(sub_b))}
    else:
        new_letters = spec_a.letters[:ki] + invert_word(sub_b)
        remap = {s: s for s in range(ki)}
        copied = {ki + i: occ_src[len(sub_b) - 1 - i] for i in range(len(sub_b))}
    new_curves = list(cfg.curves)
    new_curves[0] = CurveSpec("arc", tuple(new_letters), spec_a.ends)
    occ = {}
    for cell, entries in cfg.occ_order:
        new_entries = []
        for (cj, s) in entries:
            if cj == 1:
                new_entries.append((1, s))
            elif s in remap:
                new_entries.append((0, remap[s]))
        occ[cell] = new_entries
    for new_idx, src in copied.items():
        cell = cell_of(new_curves[0].letters[new_idx])
        entries = occ.setdefault(cell, [])
        pos = entries.index((1, src))
        after = side * sign_of(cfg.curves[1].letters[src]) > 0
        entries.insert(pos + (1 if after else 0), (0, new_idx))
    pts = dict(cfg.point_order)
    if pt in pts:
        pts[pt] = tuple(reversed(pts[pt]))
    return Config(tuple(new_curves),
                  tuple(sorted((c, tuple(v)) for c, v in occ.items())),
                  tuple(sorted(pts.items())))


def _successors(S, cfg: Config, sysm: RealizedSystem):
    """Valid successor configurations, each strictly smaller."""
    base_total = _total_count(sysm)
    base_pair = _pair_count(sysm)
    out = []
    for mv in _spur_moves(S, cfg, sysm):
        nxt = _apply_spur(S, cfg, mv)
        got = _validate(S, nxt, base_total, base_pair, expect_pair_delta=0)
        if got is not None:
            out.append(got)
    for mv in _bigon_moves(S, cfg, sysm):
        for side in (1, -1):
            nxt = _apply_bigon(S, cfg, mv, side)
            got = _validate(S, nxt, base_total, base_pair, expect_pair_delta=-2)
            if got is not None:
                out.append(got)
                break
    for mv in _half_bigon_moves(S, cfg, sysm):
        for side in (1, -1):
            nxt = _apply_half(S, cfg, mv, side)
            got = _validate(S, nxt, base_total, base_pair, expect_pair_delta=-1)
            if got is not None:
                out.append(got)
                break
    return out


def _validate(S, cfg: Optional[Config], base_total, base_pair, expect_pair_delta):
    if cfg is None:
        return None
    try:
        sysm = cfg.realize(S)
    except (SurfaceError, ValueError):
        return None
    for ci in range(len(sysm.curves)):
        if sysm.self_crossings(ci):
            return None
    if _pair_count(sysm) - base_pair != expect_pair_delta:
        return None
    if _total_count(sysm) >= base_total:
        return None
    return (cfg, sysm)


# ---------------------------------------------------------------------------
# entry points


def initial_pair_config(S, alpha: PathWord, beta: PathWord, naive=False) -> Config:
    sysm = (stacked_system if naive else canonical_system)(S, [alpha, beta])
    return Config.of(sysm)


def greedy_reduce(S, cfg: Config) -> Tuple[Config, RealizedSystem]:
    """Deterministic reduction: first available move, repeated."""
    sysm = cfg.realize(S)
    while True:
        succ = _successors(S, cfg, sysm)
        if not succ:
            return cfg, sysm
        cfg, sysm = succ[0]


def exhaustive_min_crossings(S, alpha: PathWord, beta: PathWord,
                             naive=True, budget: int = 20000) -> int:
    """Minimum pair-crossing count over all bigon-move sequences.

    Also asserts that every maximal sequence ends with the same count
    (the bigon criterion: no local minima).
    """
    cfg = initial_pair_config(S, alpha, beta, naive=naive)
    seen: Dict[Config, None] = {}
    terminals = set()
    stack = [cfg]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen[cur] = None
        if len(seen) > budget:
            raise OracleBudgetExceeded("state budget %d exceeded" % budget)
        sysm = cur.realize(S)
        succ = _successors(S, cur, sysm)
        if not succ:
            terminals.add(_pair_count(sysm))
        else:
            stack.extend(c for c, _s in succ)
    if len(terminals) != 1:
        raise AssertionError("move sequences ended at distinct counts %r"
                             % sorted(terminals))
    return terminals.pop()


def exhaustive_min_cell_crossings(S, path: PathWord, budget: int = 20000) -> int:
    """Minimum number of cut-cell crossings over all spur-move sequences."""
    spec = CurveSpec.of(path)
    own = cover.order_occurrences(S, [(spec.kind, spec.letters, spec.ends)])
    sysm = RealizedSystem(S, [spec], own, {})
    cfg = Config.of(sysm)
    seen = set()
    terminals = set()
    stack = [cfg]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if len(seen) > budget:
            raise OracleBudgetExceeded("state budget %d exceeded" % budget)
        sysm = cur.realize(S)
        succ = []
        for mv in _spur_moves(S, cur, sysm):
            nxt = _apply_spur(S, cur, mv)
            got = _validate(S, nxt, _total_count(sysm), 0, expect_pair_delta=0)
            if got is not None:
                succ.append(got)
        if not succ:
            terminals.add(len(cur.curves[0].letters))
        else:
            stack.extend(c for c, _s in succ)
    if len(terminals) != 1:
        raise AssertionError("spur sequences ended at distinct lengths %r"
                             % sorted(terminals))
    return terminals.pop()


def reduced_pair_system(S, alpha: PathWord, beta: PathWord) -> RealizedSystem:
    """Bigon-free realization of a normalized pair, checked against linking."""
    cfg = initial_pair_config(S, alpha, beta, naive=False)
    _cfg, sysm = greedy_reduce(S, cfg)
    expected = cover.pair_records(S, alpha, beta)
    got = sysm.pair_crossings(0, 1)
    if len(got) != len(expected):
        raise AssertionError("reduced realization has %d crossings, linking %d"
                             % (len(got), len(expected)))
    if sorted(c.sign for c in got) != sorted(r[0] for r in expected):
        raise AssertionError("crossing signs disagree between realization and linking")
    return sysm


def oracle_boundary_number(S, alpha: PathWord, beta: PathWord,
                           budget: int = 20000) -> int:
    """Boundary intersection number from move-engine terminal states.

    Starts from the naive stacked realization, reduces by moves, and
    reads the endpoint germ sides off the terminal mark order (a mark
    placed counterclockwise-after its partner means the germ leaves on
    the clockwise side).  Asserts every terminal state agrees.
    """
    cfg = initial_pair_config(S, alpha, beta, naive=True)
    seen = set()
    stack = [cfg]
    values = set()
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if len(seen) > budget:
            raise OracleBudgetExceeded("state budget %d exceeded" % budget)
        sysm = cur.realize(S)
        succ = _successors(S, cur, sysm)
        if succ:
            stack.extend(c for c, _s in succ)
        else:
            values.add(_terminal_boundary_number(sysm))
    if len(values) != 1:
        raise AssertionError("terminal states disagree on i_bd: %r" % sorted(values))
    return values.pop()


def _terminal_boundary_number(sysm: RealizedSystem) -> int:
    spec_a, spec_b = sysm.curves
    if set(spec_a.ends) != set(spec_b.ends):
        raise SurfaceError("arcs must share both endpoints")
    total = 0
    for pt in set(spec_a.ends) & set(spec_b.ends):
        wa = 0 if spec_a.ends[0] == pt else 1
        wb = 0 if spec_b.ends[0] == pt else 1
        ma = sysm.mark_index[("end", 0, wa, None)]
        mb = sysm.mark_index[("end", 1, wb, None)]
        if abs(ma - mb) != 1:
            raise AssertionError("shared endpoint marks are not adjacent")
        sig_a = 1 if wa == 0 else -1
        sig_b = 1 if wb == 0 else -1
        # germ side from the mark order; sense pinned by the Hopf anchors
        f = 1 if mb < ma else -1
        total += sig_a * sig_b * f
    if total % 2 != 0:
        raise AssertionError("endpoint signs must sum to an even integer")
    return total // 2
