"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (error JSON on stdout), 2 on a
parse or usage error.
"""

from __future__ import annotations

import functools
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import acceptance
from .complexes import SCHEMA, SNCStratum, chart_real_vertices, dual_intersection_chart, ks_skeleton, to_svg
from .dsl import parse_element, parse_presentation
from .errors import ParseError, SkeletaError
from .localize import K_MAX, SELF, ZERO, LocalizationSpec, bounded_localization
from .polytope import (RationalPolytope, conjectural_interval_cover, integral_spectrum_vs_faces,
                       polytope_semiring)
from .presentation import MONOMIAL, TropPoly, eq, normalize
from .spectrum import enumerate_points, integral_spectrum
from .tropicalize import corner_locus, curve_svg, format_affine_join, parse_tpoly, trop_relations, tropical_terms

FORMATS = ("json", "svg", "text")


class Ctx:
    def __init__(self, out, fmt, seed, kmax):
        self.out, self.fmt, self.seed, self.kmax = None, None, seed, kmax
        self.set_output(out, fmt)

    def set_output(self, out, fmt):
        if fmt is not None:
            self.fmt = fmt
        if out is not None:
            # "--out svg" names a format rather than a file
            if out in FORMATS and fmt is None:
                self.fmt = out
            else:
                self.out = out

    def emit(self, data=None, text=None, svg=None, default="json"):
        fmt = self.fmt or default
        if fmt == "svg" and svg is not None:
            body = svg
        elif fmt == "text" and text is not None:
            body = text if text.endswith("\n") else text + "\n"
        else:
            body = json.dumps({"schema": SCHEMA, **(data or {})}, indent=2) + "\n"
        if self.out:
            Path(self.out).write_text(body)
        else:
            click.echo(body, nl=False)


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _frac(s: str) -> Fraction:
    return Fraction(s.strip())


def parse_box(text: str) -> RationalPolytope:
    """``[a,b]^d`` or ``[a,b]x[c,d]``."""
    text = text.replace(" ", "")
    m = re.fullmatch(r"\[([^,\]]+),([^\]]+)\]\^(\d)", text)
    if m:
        lo, hi, d = _frac(m.group(1)), _frac(m.group(2)), int(m.group(3))
        return RationalPolytope.box((lo,) * d, (hi,) * d)
    parts = re.findall(r"\[([^,\]]+),([^\]]+)\]", text)
    if not parts or "x".join(f"[{a},{b}]" for a, b in parts) != text:
        raise ParseError(1, 1, "a box like [a,b]^d or [a,b]x[c,d]", text)
    return RationalPolytope.box([_frac(a) for a, _ in parts], [_frac(b) for _, b in parts])


def load_polytope(polytope: str | None, box: str | None) -> RationalPolytope:
    if polytope:
        try:
            return RationalPolytope.from_json(json.loads(_read(polytope)))
        except (json.JSONDecodeError, KeyError, TypeError) as err:
            raise ParseError(1, 1, "polytope JSON with rank and halfspaces", str(err)) from None
    if box:
        return parse_box(box)
    raise click.UsageError("give --polytope FILE or --box SPEC")


def output_options(f):
    """Let --out and --format also follow the verb."""

    @click.option("--out", "out_", default=None, help="Output path (or json/svg/text to pick a format).")
    @click.option("--format", "fmt_", type=click.Choice(FORMATS), default=None)
    @functools.wraps(f)
    def wrapper(c, *args, out_=None, fmt_=None, **kwargs):
        c.set_output(out_, fmt_)
        return f(c, *args, **kwargs)

    return wrapper


@click.group()
@click.option("--out", default=None, help="Output path (or json/svg/text to pick a format).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default=None)
@click.option("--seed", type=int, default=None, help="Seed for randomized suites (default $SKELETA_SEED).")
@click.option("--kmax", type=int, default=K_MAX, show_default=True, help="Saturation cap.")
@click.pass_context
def cli(ctx, out, fmt, seed, kmax):
    """Computations with finitely presented idempotent semirings."""
    if seed is None:
        seed = int(os.environ.get("SKELETA_SEED", acceptance.DEFAULT_SEED))
    ctx.obj = Ctx(out, fmt, seed, kmax)


@cli.command("normalize")
@click.argument("source")
@click.argument("expr")
@click.pass_obj
@output_options
def normalize_cmd(c: Ctx, source, expr):
    """Normal form of EXPR in the presentation SOURCE."""
    P = parse_presentation(_read(source))
    e = parse_element(expr, P)
    nf = normalize(e, P)
    c.emit({"input": P.format(e), "normal_form": P.format(nf)}, text=P.format(nf))


@cli.command("eq")
@click.argument("source")
@click.argument("a")
@click.argument("b")
@click.pass_obj
@output_options
def eq_cmd(c: Ctx, source, a, b):
    """Decide A = B in SOURCE."""
    P = parse_presentation(_read(source))
    d = eq(parse_element(a, P), parse_element(b, P), P)
    c.emit(d.to_json(), text=d.status)


@cli.command("spec")
@click.argument("source")
@click.option("--naive", is_flag=True, help="Enumerate B-points of the reduced relations only.")
@click.pass_obj
@output_options
def spec_cmd(c: Ctx, source, naive):
    """Finite spectrum of SOURCE."""
    P = parse_presentation(_read(source))
    if P.base != "Bool" and P.klass == MONOMIAL and not naive:
        spec, im = integral_spectrum(P)
        data = {"method": "integral-model", **spec.to_json(),
                "model_generators": {k: P.format(_term(P, *v)) for k, v in sorted(im.terms.items())}}
    else:
        spec = enumerate_points(P)
        data = {"method": "enumeration", **spec.to_json()}
    data["count"] = len(spec.points)
    c.emit(data, text=f"{len(spec.points)} points")


def _term(P, exps, const):
    return TropPoly([(exps, const)], P.n)


@cli.command("localize")
@click.argument("source")
@click.option("--invert", "S", required=True, help="Element S to invert.")
@click.option("--bound", "T", default="zero", show_default=True, help="Bound T, 'zero' (cellular) or 'self'.")
@click.option("--negated", is_flag=True, help="Invert -S instead of S.")
@click.pass_obj
@output_options
def localize_cmd(c: Ctx, source, S, T, negated):
    """Bounded localization of SOURCE inverting S."""
    P = parse_presentation(_read(source))
    s = parse_element(S, P)
    t = T if T in (ZERO, SELF) else parse_element(T, P)
    Q, h = bounded_localization(P, LocalizationSpec(s, t, negated))
    c.emit({"presentation": Q.to_dsl(), "images": [Q.format(x) for x in h.images]}, text=Q.to_dsl(), default="text")


@cli.command("polytope")
@click.option("--polytope", "path", default=None, help="Polytope JSON file.")
@click.option("--box", default=None, help="Box such as [0,1]^2.")
@click.pass_obj
@output_options
def polytope_cmd(c: Ctx, path, box):
    """Polytope semiring, faces and the spectrum/face check."""
    P = load_polytope(path, box)
    PS = polytope_semiring(P)
    cert = integral_spectrum_vs_faces(P)
    pt = lambda v: [str(x) for x in v]
    data = {
        "polytope": P.to_json(),
        "vertices": [pt(v) for v in P.vertices],
        "generators": {g: PS.describe(i) for i, g in enumerate(PS.presentation.names)},
        "presentation": PS.presentation.to_dsl(),
        "faces": [{"dim": F.dim, "vertices": [pt(v) for v in F.vertices], "rays": [list(r) for r in F.rays]}
                  for F in P.faces()],
        "spectrum_matches_faces": cert.ok,
        "opens": cert.n_opens,
    }
    c.emit(data, text=PS.presentation.to_dsl())


@cli.command("dualcx")
@click.option("--n", "n", type=int, required=True, help="Ambient dimension.")
@click.option("--mult", default=None, help="Comma-separated multiplicities (default all 1).")
@click.pass_obj
@output_options
def dualcx_cmd(c: Ctx, n, mult):
    """Dual intersection chart of t = prod x_i^(n_i)."""
    ms = tuple(int(x) for x in mult.split(",")) if mult else (1,) * n
    try:
        s = SNCStratum(n, ms)
    except ValueError as err:
        raise SkeletaError(str(err)) from None
    P = dual_intersection_chart(s)
    spec, _ = integral_spectrum(P)
    data = {"presentation": P.to_dsl(), "real_vertices": [[str(x) for x in v] for v in chart_real_vertices(s)],
            "points": len(spec.points)}
    c.emit(data, text=P.to_dsl())


@cli.command("ks")
@click.option("--n", "n", type=int, required=True, help="Number of components of the cycle.")
@click.pass_obj
@output_options
def ks_cmd(c: Ctx, n):
    """The elliptic skeleton: a cycle of n intervals."""
    K = ks_skeleton(n)
    C = K.complex
    labels = [f"{C.names[p]}: dim {C.dim(p)}" for p in range(len(C.points))]
    c.emit(C.to_json() | {"schema": SCHEMA}, text="\n".join(labels), svg=to_svg(C))


@cli.command("trop")
@click.option("--poly", "polys", multiple=True, required=True, help="Polynomial in x, y and t (repeatable).")
@click.option("--polytope", "path", default=None, help="Domain as polytope JSON.")
@click.option("--clip", default=None, help="Box such as [-4,1]^2 (domain if no --polytope, and drawing window).")
@click.option("--relations", is_flag=True, help="Emit the tropical relations as a presentation.")
@click.pass_obj
@output_options
def trop_cmd(c: Ctx, polys, path, clip, relations):
    """Tropicalize polynomials; the corner locus of the first one."""
    fs = [parse_tpoly(p, ["x", "y"]) for p in polys]
    domain = load_polytope(path, clip)
    if relations:
        r = trop_relations(fs, domain)
        c.emit({"presentation": r.presentation.to_dsl(), "inconsistent": r.inconsistent},
               text=r.presentation.to_dsl(), default="text")
        return
    terms = tropical_terms(fs[0])
    curve = corner_locus(terms, domain)
    window = parse_box(clip) if clip else domain
    if not window.bounded:
        raise SkeletaError("drawing an unbounded domain needs --clip")
    lo = tuple(min(v[i] for v in window.vertices) for i in range(2))
    hi = tuple(max(v[i] for v in window.vertices) for i in range(2))
    c.emit({"tropicalization": format_affine_join(terms), **curve.to_json()}, text=format_affine_join(terms),
           svg=curve_svg(curve, (lo, hi)))


@cli.command("cover-check")
@click.argument("a")
@click.argument("b")
@click.argument("subsets")
@click.pass_obj
@output_options
def cover_check_cmd(c: Ctx, a, b, subsets):
    """Conjectural cover criterion for subsets of [A, B]; SUBSETS is JSON like '[[[0,1]],[["1/2",2]]]'."""
    try:
        data = json.loads(subsets)
    except json.JSONDecodeError as err:
        raise ParseError(1, err.colno, "JSON list of lists of intervals", subsets) from None
    res = conjectural_interval_cover(_frac(a), _frac(b), [[(str(x), str(y)) for x, y in U] for U in data])
    c.emit(res, text=f"covers: {res['covers']} (conjectural)")


@cli.command("accept")
@click.option("--case", "cases", type=int, multiple=True, help="Run only these cases.")
@click.pass_obj
@output_options
def accept_cmd(c: Ctx, cases):
    """Run the acceptance suite and print a pass/fail table."""
    results = acceptance.run_cases(list(cases) or None, seed=c.seed, kmax=c.kmax, echo=False)
    table = "\n".join(r.line() for r in results)
    c.emit({"seed": c.seed, "cases": [r.to_json() for r in results]}, text=table, default="text")
    if not all(r.passed for r in results):
        sys.exit(1)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="skeleta", standalone_mode=False)
    except ParseError as err:
        click.echo(json.dumps({"schema": SCHEMA, **err.to_json()}, indent=2))
        sys.exit(2)
    except SkeletaError as err:
        click.echo(json.dumps({"schema": SCHEMA, **err.to_json()}, indent=2))
        sys.exit(1)
    except click.exceptions.Exit as err:
        sys.exit(err.exit_code)
    except click.ClickException as err:
        err.show()
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(1)
    sys.exit(0)


if __name__ == "__main__":
    main()
