"""Command-line front end.

    singbs reso12 compare --n 30 --window -5,5 --out cmp.csv
    singbs sphere quantum --l 2 --a -1 --b 1
    singbs selftest
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import model_reso12, model_sphere
from .comparison import pair_spectra
from .errors import ModelError, SingBSError
from .selftest import identity_suite

MODES = ("quantum", "semiclassical", "compare", "spacings")
DEFAULT_WINDOW = {"reso12": (-5.0, 5.0), "sphere": (-3.0, 3.0)}

COMPARE_FIELDS = ("index", "e_quantum", "e_semiclassical", "abs_diff")
SPACING_FIELDS = ("index", "e_mid", "gap", "gap_times_nlogn")


@dataclass(frozen=True)
class RunConfig:
    model: str
    mode: str
    n: int
    l: int
    a: float
    b: float
    window: tuple[float, float]
    step: float
    tol: float
    out: str | None
    format: str
    threads: int


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi but got {text!r}") from None
    return lo, hi


def _positive(kind):
    def parse(text: str):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v

    return parse


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("mode", choices=MODES)
    p.add_argument("--window", type=_window, default=None, metavar="LO,HI")
    p.add_argument("--step", type=_positive(float), default=0.01)
    p.add_argument("--tol", type=_positive(float), default=1e-10)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=_positive(int), default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singbs",
        description="Semiclassical spectra near hyperbolic singularities versus exact matrices.",
    )
    sub = parser.add_subparsers(dest="model", required=True)
    reso = sub.add_parser("reso12", help="1:2 resonance on the level E1 = 1")
    _add_common(reso)
    reso.add_argument("--n", type=int, default=30)
    sph = sub.add_parser("sphere", help="harmonic potential on S^2")
    _add_common(sph)
    sph.add_argument("--l", type=int, default=40)
    sph.add_argument("--a", type=float, default=-1.0)
    sph.add_argument("--b", type=float, default=1.0)
    sub.add_parser("selftest", help="special-function identity suite")
    return parser


def _join_window_values(argv: Sequence[str]) -> list[str]:
    # "--window -5,5" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(range(len(argv)))
    for i in it:
        if argv[i] == "--window" and i + 1 < len(argv):
            out.append(f"--window={argv[i + 1]}")
            next(it, None)
        else:
            out.append(argv[i])
    return out


def parse_config(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(_join_window_values(argv))
    if ns.model == "selftest":
        return RunConfig("selftest", "selftest", 0, 0, 0.0, 0.0, (0.0, 0.0), 0.01, 1e-10, None, "csv", 1)
    window = ns.window or DEFAULT_WINDOW[ns.model]
    if not window[0] < window[1]:
        parser.error(f"window needs lo < hi, got {window[0]:g},{window[1]:g}")
    return RunConfig(
        model=ns.model,
        mode=ns.mode,
        n=getattr(ns, "n", 0),
        l=getattr(ns, "l", 0),
        a=getattr(ns, "a", 0.0),
        b=getattr(ns, "b", 0.0),
        window=window,
        step=ns.step,
        tol=ns.tol,
        out=ns.out,
        format=ns.format,
        threads=ns.threads,
    )


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    return "%.15e" % (x + 0.0)


def _json_value(x):
    if isinstance(x, (str, int)):
        return x
    return float("%.15e" % (x + 0.0))


def render(fields: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        records = [{k: _json_value(v) for k, v in zip(fields, r)} for r in rows]
        return json.dumps(records, indent=1) + "\n"
    lines = [",".join(fields)]
    lines.extend(",".join(_fmt(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


class _Model:
    """Uniform access to the two models for the table builders."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        if cfg.model == "reso12":
            model_reso12.model(cfg.n)
            self.size = cfg.n
            self.h = model_reso12.model(cfg.n).h
        else:
            self.sphere = model_sphere.invariants(cfg.a, cfg.b, cfg.l)
            self.size = cfg.l
            self.h = self.sphere.h

    def quantum(self) -> list[float]:
        if self.cfg.model == "reso12":
            return model_reso12.quantum_spectrum_scaled(self.cfg.n)
        return model_sphere.quantum_spectrum_scaled(self.sphere)

    def semiclassical(self) -> list[tuple[float, str]]:
        c = self.cfg
        if c.model == "reso12":
            roots = model_reso12.semiclassical_spectrum(c.n, c.window, c.step, c.tol)
            return [(x, "") for x in roots]
        return model_sphere.semiclassical_spectrum(self.sphere, c.window, c.step, c.tol)


def build_table(cfg: RunConfig) -> tuple[tuple[str, ...], list[tuple]]:
    m = _Model(cfg)
    if cfg.mode == "quantum":
        return ("index", "e"), list(enumerate(m.quantum()))
    if cfg.mode == "semiclassical":
        sc = m.semiclassical()
        if cfg.model == "reso12":
            return ("index", "e"), [(i, x) for i, (x, _) in enumerate(sc)]
        return ("index", "e", "branch"), [(i, x, b) for i, (x, b) in enumerate(sc)]
    if cfg.mode == "compare":
        with ThreadPoolExecutor(max_workers=min(cfg.threads, 2)) as pool:
            fq = pool.submit(m.quantum)
            fs = pool.submit(m.semiclassical)
            q, sc = fq.result(), fs.result()
        table = pair_spectra(q, [x for x, _ in sc], cfg.window)
        return COMPARE_FIELDS, [
            (r.index, r.e_quantum, r.e_semiclassical, r.abs_diff) for r in table.rows
        ]
    if m.size < 2:
        raise ModelError("spacings need n (or l) >= 2")
    roots = [x for x, _ in m.semiclassical()]
    nlogn = m.size * math.log(m.size)
    rows = []
    for i, (x0, x1) in enumerate(zip(roots, roots[1:])):
        gap = (x1 - x0) * m.h
        rows.append((i, 0.5 * (x0 + x1), gap, gap * nlogn))
    return SPACING_FIELDS, rows


def _selftest(stdout) -> int:
    results = identity_suite()
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        stdout.write(f"{tag} {r.name}: {r.value:.3e} (bound {r.bound:.0e})\n")
    return 0 if all(r.passed for r in results) else 1


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        saved = sys.stderr
        sys.stderr = stderr
        try:
            cfg = parse_config(argv)
        finally:
            sys.stderr = saved
    except SystemExit as exc:
        return int(exc.code or 0)
    if cfg.mode == "selftest":
        return _selftest(stdout)
    try:
        fields, rows = build_table(cfg)
    except SingBSError as exc:
        stderr.write(f"singbs: error: {exc}\n")
        return 1
    text = render(fields, rows, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
