"""Command-line front end.

Verbs map one-to-one onto module operations:

  check-arc        profile an arc against the monodromy and certify
  search           bounded search for a sobering arc
  certify-power    power criterion for a profile-sum -1 arc
  boundneg         negative boundary twists on a positive-genus page
  graph-classify   configuration-graph classification
  deplumb          detect and remove a positive Hopf-band summand
  verify-relations lantern / chain / twist-roundtrip checks

Exit codes: 0 certified or verified, 2 inconclusive, unknown or
excluded, 1 malformed input or internal error.  Reports are plain text
or canonical JSON (no timestamps).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .configgraph import ConfigGraph, GraphError, build_open_book, classify, is_positive
from .openbook import (
    OpenBook,
    deplumb_hopf,
    detect_hopf_summand,
    hopf_band,
    page_summary,
)
from .oracle import exhaustive_min_crossings, oracle_boundary_number
from .sobering import (
    SoberingCertificate,
    certify,
    certify_power,
    check_boundneg,
    profile_arc,
    search_sobering,
)
from .surface import PathWord, SurfaceError, SurfacePresentation, build_surface, normalize
from .twist import TwistWord, words_equal
from .words import cell_of, sign_of

FORMAT_VERSION = 1


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise InputError("%s: line %d column %d: %s"
                         % (path, err.lineno, err.colno, err.msg)) from None
    except OSError as err:
        raise InputError(str(err)) from None


def _check_fields(data, allowed, required, what):
    unknown = set(data) - set(allowed)
    if unknown:
        raise InputError("%s: unknown field(s) %s" % (what, ", ".join(sorted(unknown))))
    missing = set(required) - set(data)
    if missing:
        raise InputError("%s: missing field(s) %s" % (what, ", ".join(sorted(missing))))
    if data.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise InputError("%s: unsupported version %r" % (what, data.get("version")))


def parse_surface(data) -> SurfacePresentation:
    _check_fields(data, ("version", "genus", "boundary"), ("genus", "boundary"), "surface")
    return build_surface(int(data["genus"]), int(data["boundary"]))


def emit_surface(S: SurfacePresentation):
    return {"version": FORMAT_VERSION, "genus": S.genus, "boundary": S.boundary_count}


def parse_path(S: SurfacePresentation, data) -> PathWord:
    if isinstance(data, str):
        return S.curve(data)
    _check_fields(data, ("version", "kind", "crossings", "start", "end", "catalog"),
                  (), "path")
    if "catalog" in data:
        return S.curve(data["catalog"])
    kind = data.get("kind", "arc")
    letters = []
    for sym in data.get("crossings", []):
        name, sign = sym[:-1], sym[-1]
        if sign not in "+-":
            raise InputError("crossing %r needs a trailing sign" % sym)
        try:
            cell = S.cell_index(name)
        except ValueError:
            raise InputError("unknown cut cell %r" % name) from None
        letters.append(2 * cell + (0 if sign == "+" else 1))
    if kind == "closed":
        return normalize(S, PathWord(S, "closed", letters))
    try:
        start = (S.seg_names.index(data["start"][0]), int(data["start"][1]))
        end = (S.seg_names.index(data["end"][0]), int(data["end"][1]))
    except (KeyError, ValueError, IndexError):
        raise InputError("arc needs start/end [segment, station]") from None
    return normalize(S, PathWord(S, "arc", letters, ends=(start, end)))


def emit_path(p: PathWord):
    S = p.surface
    out = {"version": FORMAT_VERSION, "kind": p.kind,
           "crossings": ["%s%s" % (S.cells[cell_of(l)], "+" if sign_of(l) > 0 else "-")
                         for l in p.letters]}
    if p.ranks is not None:
        out["ranks"] = list(p.ranks)
    if p.kind == "arc":
        out["start"] = [S.seg_names[p.ends[0][0]], p.ends[0][1]]
        out["end"] = [S.seg_names[p.ends[1][0]], p.ends[1][1]]
    return out


def parse_open_book(data) -> OpenBook:
    _check_fields(data, ("version", "surface", "monodromy", "catalog_extras"),
                  ("surface", "monodromy"), "open book")
    S = parse_surface(data["surface"])
    for extra in data.get("catalog_extras", []):
        _check_fields(extra, ("name", "path"), ("name", "path"), "catalog extra")
        S.register_curve(extra["name"], parse_path(S, extra["path"]))
    try:
        word = TwistWord.make(S, data["monodromy"])
    except SurfaceError as err:
        raise InputError(str(err)) from None
    return OpenBook(S, word)


def emit_open_book(B: OpenBook):
    return {"version": FORMAT_VERSION,
            "surface": emit_surface(B.surface),
            "monodromy": B.monodromy.serial(),
            "catalog_extras": []}


def parse_graph(data, warn) -> ConfigGraph:
    _check_fields(data, ("version", "vertices", "edges"), ("vertices",), "graph")
    vertices = []
    for i, v in enumerate(data["vertices"]):
        unknown = set(v) - {"g", "m", "a"}
        if unknown:
            raise InputError("vertex %d: unknown field(s) %s"
                             % (i, ", ".join(sorted(unknown))))
        if "a" in v:
            warn("vertex %d: symplectic area label accepted and ignored" % i)
        vertices.append((int(v.get("g", 0)), int(v.get("m", 0))))
    edges = tuple((int(u), int(w)) for u, w in data.get("edges", []))
    try:
        return ConfigGraph(tuple(vertices), edges)
    except GraphError as err:
        raise InputError(str(err)) from None


def emit_certificate(cert: SoberingCertificate):
    out = {
        "verdict": cert.verdict,
        "i_alg": cert.profile.i_alg,
        "i_geom": cert.profile.i_geom,
        "i_boundary": cert.profile.i_bd,
        "isotopic_image": cert.profile.isotopic,
        "chi_S": cert.chi_s,
        "framing": cert.framing,
        "twist_plus_chi": cert.twist_plus_chi,
        "power": cert.n,
    }
    if cert.arc is not None:
        out["witness_arc"] = emit_path(cert.arc)
    if cert.monodromy is not None:
        out["monodromy"] = ["%s%s" % (n, "+" if s > 0 else "-")
                            for n, s in cert.monodromy]
    return out


# ---------------------------------------------------------------------------
# report plumbing


class Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines = []
        self.data = {}
        self.warnings = []

    def warn(self, msg):
        self.warnings.append(msg)

    def say(self, text, **fields):
        self.lines.append(text)
        self.data.update(fields)

    def flush(self, code: int) -> int:
        if self.fmt == "json":
            payload = dict(self.data)
            payload["exit"] = code
            if self.warnings:
                payload["warnings"] = self.warnings
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            for w in self.warnings:
                print("warning: %s" % w, file=sys.stderr)
            for line in self.lines:
                print(line)
        return code


def _oracle_check(rep: Report, B: OpenBook, arc: PathWord):
    from .openbook import monodromy_image

    img = monodromy_image(B, arc)
    got = (exhaustive_min_crossings(B.surface, arc, img),
           oracle_boundary_number(B.surface, arc, img))
    pr = profile_arc(B, arc)
    agree = got == (pr.i_geom, pr.i_bd)
    rep.say("oracle cross-check: i_geom=%d i_boundary=%d (%s)"
            % (got[0], got[1], "agrees" if agree else "DISAGREES"),
            oracle={"i_geom": got[0], "i_boundary": got[1], "agrees": agree})
    if not agree:
        raise AssertionError("bigon-move oracle disagrees with the engine")


# ---------------------------------------------------------------------------
# verbs


def cmd_check_arc(args, rep: Report) -> int:
    B = parse_open_book(load_json(args.book))
    arc = parse_path(B.surface, load_json(args.arc) if args.arc else args.arc_name)
    cert = certify(B, arc)
    rep.say("profile: i_alg=%d i_geom=%d i_boundary=%d isotopic=%s"
            % (cert.profile.i_alg, cert.profile.i_geom, cert.profile.i_bd,
               cert.profile.isotopic))
    rep.say("certificate: chi_S=%d framing=%d twist_plus_chi=%d -> %s"
            % (cert.chi_s, cert.framing, cert.twist_plus_chi, cert.verdict),
            certificate=emit_certificate(cert))
    if args.oracle:
        _oracle_check(rep, B, arc)
    return 0 if cert.overtwisted() else 2


def cmd_search(args, rep: Report) -> int:
    B = parse_open_book(load_json(args.book))
    found = search_sobering(B, args.max_crossings)
    if found is None:
        rep.say("no sobering arc with at most %d crossings (unknown, not tight)"
                % args.max_crossings, found=False)
        return 2
    arc, cert = found
    rep.say("sobering arc found: %s" % emit_path(arc)["crossings"],
            found=True, certificate=emit_certificate(cert))
    rep.say("certificate: chi_S=%d framing=%d twist_plus_chi=%d -> %s"
            % (cert.chi_s, cert.framing, cert.twist_plus_chi, cert.verdict))
    if args.oracle:
        _oracle_check(rep, B, arc)
    return 0


def cmd_certify_power(args, rep: Report) -> int:
    B = parse_open_book(load_json(args.book))
    arc = parse_path(B.surface, load_json(args.arc) if args.arc else args.arc_name)
    cert = certify_power(B, arc, args.power)
    rep.say("power %d certificate: chi_S=%d framing=%d twist_plus_chi=%d -> %s"
            % (cert.n, cert.chi_s, cert.framing, cert.twist_plus_chi, cert.verdict),
            certificate=emit_certificate(cert))
    return 0


def cmd_boundneg(args, rep: Report) -> int:
    cert = check_boundneg(args.genus, args.twists)
    rep.say("genus %d with %d negative boundary twists: %s "
            "(power %d, twist_plus_chi %d)"
            % (args.genus, args.twists, cert.verdict, cert.n, cert.twist_plus_chi),
            certificate=emit_certificate(cert))
    return 0 if cert.overtwisted() else 2


def cmd_graph_classify(args, rep: Report) -> int:
    G = parse_graph(load_json(args.graph), rep.warn)
    rep.say("positive: %s" % is_positive(G), positive=is_positive(G))
    verdict = classify(G)
    if verdict.outcome == "Excluded":
        rep.say("Excluded(%d)" % verdict.case,
                outcome="Excluded", case=verdict.case)
        return 2
    if verdict.outcome == "NotApplicable":
        rep.say("NotApplicable: no vertex with degree 1 and genus 0",
                outcome="NotApplicable")
        return 2
    if verdict.outcome == "Unknown":
        rep.say("Unknown: the constructive proof did not verify",
                outcome="Unknown", trace=list(verdict.trace))
        for line in verdict.trace:
            rep.say("  " + line)
        return 2
    rep.say("Overtwisted", outcome="Overtwisted",
            certificate=emit_certificate(verdict.certificate),
            trace=list(verdict.trace))
    for line in verdict.trace:
        rep.say("  " + line)
    return 0


def cmd_deplumb(args, rep: Report) -> int:
    B = parse_open_book(load_json(args.book))
    found = detect_hopf_summand(B)
    if found is None:
        rep.say("no Hopf-band summand detected among catalog arcs", found=False)
        return 2
    arc, sign = found
    rep.say("detected a %s Hopf band transverse to %s"
            % ("positive" if sign > 0 else "negative", emit_path(arc)["crossings"]),
            found=True, sign=sign)
    result = deplumb_hopf(B, arc, sign)
    rep.say("deplumbed page: genus %d, %d boundary components, monodromy %s"
            % (result.surface.genus, result.surface.boundary_count,
               result.monodromy.serial()),
            result=emit_open_book(result))
    return 0


def cmd_verify_relations(args, rep: Report) -> int:
    name = args.relation
    if name in ("lantern", "all"):
        ok = _verify_lantern()
        rep.say("lantern relation on the four-holed sphere: %s"
                % ("verified" if ok else "FAILED"), lantern=ok)
        if not ok:
            return 1
    if name in ("chain", "all"):
        ok = _verify_chain(args.genus or 1)
        rep.say("chain relation on the genus-%d one-boundary page: %s"
                % (args.genus or 1, "verified" if ok else "FAILED"), chain=ok)
        if not ok:
            return 1
    if name in ("roundtrip", "all"):
        ok = _verify_roundtrip()
        rep.say("twist roundtrip D+ then D-: %s"
                % ("verified" if ok else "FAILED"), roundtrip=ok)
        if not ok:
            return 1
    return 0


def _verify_lantern() -> bool:
    from .words import enc

    L = build_surface(0, 4)
    x = normalize(L, PathWord(L, "closed", (enc(0, 1), enc(1, 1))))
    y = normalize(L, PathWord(L, "closed", (enc(1, 1), enc(2, 1))))
    z = normalize(L, PathWord(L, "closed", (enc(0, 1), enc(2, 1))))
    L.register_curve("x", x)
    L.register_curve("y", y)
    L.register_curve("z", z)
    holes = TwistWord.make(L, ["delta1+", "delta2+", "delta3+", "delta4+"])
    interior = TwistWord.make(L, ["x+", "y+", "z+"])
    return words_equal(L, holes, interior)


def _verify_chain(g: int) -> bool:
    S = build_surface(g, 1)
    letters = []
    for i in range(1, g + 1):
        letters += ["a%d+" % i, "b%d+" % i]
    chain = TwistWord.make(S, letters) ** (4 * g + 2)
    return words_equal(S, chain, TwistWord.make(S, ["delta1+"]))


def _verify_roundtrip() -> bool:
    from .surface import is_isotopic
    from .twist import apply_word

    A = build_surface(0, 2)
    alpha = A.curve("dual_p1")
    img = apply_word(A, TwistWord.make(A, ["c+", "c-"]), alpha)
    return is_isotopic(A, img, alpha)


# ---------------------------------------------------------------------------
# argument parsing


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="openbooks",
        description="overtwistedness certificates for open books")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="verb", required=True)

    def book_arg(sp):
        sp.add_argument("book", help="open book JSON file")

    sp = sub.add_parser("check-arc", help="profile an arc and certify")
    book_arg(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--arc", help="arc JSON file")
    g.add_argument("--arc-name", help="catalog arc name")
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check with the exhaustive bigon-move oracle")
    sp.set_defaults(func=cmd_check_arc)

    sp = sub.add_parser("search", help="bounded sobering-arc search")
    book_arg(sp)
    sp.add_argument("--max-crossings", type=int, default=8)
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("certify-power", help="power criterion certificate")
    book_arg(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--arc", help="arc JSON file")
    g.add_argument("--arc-name", help="catalog arc name")
    sp.add_argument("--power", type=int, required=True)
    sp.set_defaults(func=cmd_certify_power)

    sp = sub.add_parser("boundneg", help="negative boundary twists")
    sp.add_argument("genus", type=int)
    sp.add_argument("twists", type=int)
    sp.set_defaults(func=cmd_boundneg)

    sp = sub.add_parser("graph-classify", help="configuration graph verdict")
    sp.add_argument("graph", help="graph JSON file")
    sp.set_defaults(func=cmd_graph_classify)

    sp = sub.add_parser("deplumb", help="detect and remove a Hopf band")
    book_arg(sp)
    sp.set_defaults(func=cmd_deplumb)

    sp = sub.add_parser("verify-relations", help="mapping class relations")
    sp.add_argument("relation", choices=("lantern", "chain", "roundtrip", "all"))
    sp.add_argument("--genus", type=int, default=None)
    sp.set_defaults(func=cmd_verify_relations)
    return p


def main(argv: Optional[list] = None) -> int:
    args = make_parser().parse_args(argv)
    rep = Report(args.format)
    try:
        code = args.func(args, rep)
    except (InputError, SurfaceError, GraphError) as err:
        rep.say("error: %s" % err, error=str(err))
        return rep.flush(1)
    return rep.flush(code)


if __name__ == "__main__":
    sys.exit(main())
