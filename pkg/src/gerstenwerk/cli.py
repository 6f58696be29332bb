"""Command line: gerstenwerk ext|bracket|verify|cache.

Exit codes: 0 ok, 2 validation error, 3 truncation (raise --max-degree),
4 a verified identity failed.
"""

import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import report as rp
from .algebra import load_algebra
from .bar import BarResolution, verify_power_flat
from .errors import GerstenwerkError, TruncationError, ValidationError
from .ext import Cocycle, HochschildCohomology, oracle_gerstenhaber

VERIFY_DEFAULT = ("schwede-hermann", "diamond", "factorizing")
VERIFY_KNOWN = ("schwede-hermann", "diamond", "factorizing", "power-flat")


@dataclass
class JobConfig:
    algebra_path: Path
    N: int
    pairs: list = field(default_factory=list)
    verify: dict = field(default_factory=dict)  # name -> parameter (None or int)
    cache_dir: Path | None = None
    report_path: Path | None = None

    def as_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs],
                "verify": {k: v for k, v in sorted(self.verify.items())}}


def parse_pairs(values) -> list:
    pairs = []
    for v in values:
        for tok in re.split(r"[\s;]+", v.strip()):
            if not tok:
                continue
            m = re.fullmatch(r"(\d+),(\d+)", tok)
            if not m:
                raise ValidationError(f"bad degree pair {tok!r}; expected m,k")
            pairs.append((int(m.group(1)), int(m.group(2))))
    return pairs


def parse_verify(value: str | None) -> dict:
    if value is None:
        return {k: None for k in VERIFY_DEFAULT}
    out = {}
    for tok in value.split(","):
        tok = tok.strip()
        if not tok:
            continue
        name, _, arg = tok.partition("=")
        if name not in VERIFY_KNOWN:
            raise ValidationError(f"unknown verification {name!r}; choose from {', '.join(VERIFY_KNOWN)}")
        if name == "power-flat":
            if not arg.isdigit() or int(arg) < 1:
                raise ValidationError("power-flat needs a power, e.g. power-flat=2")
            out[name] = int(arg)
        else:
            if arg:
                raise ValidationError(f"{name} takes no parameter")
            out[name] = None
    return out


class Job:
    """Loads the algebra and resolution once, optionally through the cache."""

    def __init__(self, config: JobConfig, window: int | None = None):
        from .cache import ResolutionCache
        from .lifting import GerstenhaberEngine
        if not config.algebra_path.exists():
            raise ValidationError(f"algebra file {config.algebra_path} does not exist")
        if config.N < 1:
            raise ValidationError("--max-degree must be at least 1")
        self.config = config
        self.algebra = load_algebra(config.algebra_path)
        self.window = config.N if window is None else window
        self.cache = ResolutionCache(config.cache_dir) if config.cache_dir else None
        if self.cache:
            self.bar = self.cache.resolution(self.algebra, self.window)
        else:
            self.bar = BarResolution(self.algebra, self.window)
        self.engine = GerstenhaberEngine(self.bar)
        if self.cache:
            self.cache.load_liftings(self.engine)
        self.H = self.engine.cohomology

    def save(self):
        if self.cache:
            self.cache.store_liftings(self.engine)


# commands ---------------------------------------------------------------------


def cmd_ext(config: JobConfig) -> dict:
    """Dimensions of cocycles, coboundaries and HH^n for n = 0..N."""
    job = Job(config, window=config.N + 1)
    rep = rp.new_report("ext", job.algebra, config.N, config.as_dict())
    rows = []
    for n in range(config.N + 1):
        b = job.H.basis(n)
        rows.append({"degree": n, "cocycles": int(b.cocycles.shape[1]),
                     "coboundaries": int(b.coboundaries.shape[1]), "cohomology": b.dim})
    rp.add_section(rep, "hochschild dimensions", True, rows=rows)
    job.save()
    return rp.finalize(rep)


def default_pairs(N: int) -> list:
    return [(m, k) for m in range(1, 4) for k in range(1, 4) if m + k + 1 <= N]


def cmd_bracket(config: JobConfig) -> dict:
    """Bracket tables on class bases, compared with the circle-product bracket."""
    job = Job(config)
    N, H, p = config.N, job.H, job.algebra.p
    pairs = config.pairs or default_pairs(N)
    for m, k in pairs:
        if m + k - 1 < 0 or (m == 0 and k == 0):
            raise ValidationError("bracket of two degree 0 classes is zero by degree")
        if m + k + 1 > N:
            raise TruncationError(f"pair ({m},{k}) needs N >= {m + k + 1}; increase --max-degree", m + k + 1)
    rep = rp.new_report("bracket", job.algebra, N, config.as_dict())
    for m, k in pairs:
        rows, ours, theirs = [], [], []
        for i, f in enumerate(H.basis_cocycles(m)):
            for j, g in enumerate(H.basis_cocycles(k)):
                b = H.coordinates(job.engine.bracket(f, g))
                o = H.coordinates(oracle_gerstenhaber(f, g))
                ours.append(b)
                theirs.append(o)
                rows.append({"i": i, "j": j, "bracket": [int(x) for x in b], "oracle": [int(x) for x in o]})
        signs = [s for s in (1, -1) if all(np.array_equal(np.mod(s * o, p), b) for b, o in zip(ours, theirs))]
        sign = signs[0] if signs else None
        for row, b, o in zip(rows, ours, theirs):
            row["match"] = bool(np.array_equal(np.mod((sign or 1) * o, p), b))
        rp.add_section(rep, f"bracket HH^{m} x HH^{k} -> HH^{m + k - 1}", sign is not None,
                       degrees=[m, k], sign=sign, rows=rows)
    job.save()
    return rp.finalize(rep)


def _zero(bar, n):
    return Cocycle(bar, n, np.zeros((bar.rank(n), bar.algebra.dim), dtype=np.int64))


def _report_section(rep, name, vr):
    d = vr.to_dict()
    rp.add_section(rep, name, d["passed"], checks=d["checks"])


def cmd_verify(config: JobConfig) -> dict:
    """Chain-level checks of the loop, diamond, factorizing and power-flat identities."""
    from .extensions import (ExtensionMorphism, factorizing_hat, identity_morphism, k_of_cocycle,
                             schwede_loop, verify_diamond_bracket, verify_schwede_hermann)
    job = Job(config)
    bar, H, N = job.bar, job.H, config.N
    rep = rp.new_report("verify", job.algebra, N, config.as_dict())
    toggles = config.verify
    if "schwede-hermann" in toggles:
        degrees = [n for n in (2, 3) if n + 1 <= N]
        if not degrees:
            raise TruncationError("schwede-hermann needs N >= 3; increase --max-degree", 3)
        for n in degrees:
            for a, f in enumerate(H.basis_cocycles(n)):
                gs = list(enumerate(H.basis_cocycles(n - 1))) + [("0", _zero(bar, n - 1))]
                for b, g in gs:
                    _report_section(rep, f"schwede-hermann n={n} f={a} g={b}", verify_schwede_hermann(f, g, H))
    if "diamond" in toggles:
        shapes = [(m, n) for m, n in ((1, 1), (1, 2), (2, 1)) if m + n + 1 <= N]
        if not shapes:
            raise TruncationError("diamond needs N >= 3; increase --max-degree", 3)
        for m, n in shapes:
            for a, f in enumerate(H.basis_cocycles(m)):
                for b, g in enumerate(H.basis_cocycles(n)):
                    vr = verify_diamond_bracket(f, g, job.engine.diag, job.engine.lifting(f), job.engine.lifting(g), H)
                    _report_section(rep, f"diamond m={m} n={n} f={a} g={b}", vr)
    if "factorizing" in toggles:
        for n in [n for n in (1, 2, 3) if n + 1 <= N]:
            for a, f in enumerate(H.basis_cocycles(n)):
                K = k_of_cocycle(f)
                E = K.extension
                betas = [("id", ExtensionMorphism(E, E, identity_morphism(E)))]
                betas += [(f"mu_f(g{b})", schwede_loop(K, g)) for b, g in enumerate(H.basis_cocycles(n - 1))]
                for label, beta in betas:
                    _report_section(rep, f"factorizing n={n} f={a} beta={label}", factorizing_hat(E, E, beta).report)
    if "power-flat" in toggles:
        r = toggles["power-flat"]
        pf = verify_power_flat(bar, r, N)
        rp.add_section(rep, f"power-flat r={r}", pf.passed, augmentation_onto=pf.augmentation_onto,
                       rows=[{"degree": i, "dim": pf.dims[i], "homology": pf.homology[i]} for i in sorted(pf.homology)])
    job.save()
    return rp.finalize(rep)


def cmd_cache(config: JobConfig) -> dict:
    """Build (or check) the cached resolution and basis liftings for this window."""
    if config.cache_dir is None:
        raise ValidationError("the cache command needs --cache DIR")
    job = Job(config)
    H, N = job.H, config.N
    for n in range(0, N):
        for f in H.basis_cocycles(n):
            job.engine.lifting(f)
    job.save()
    rep = rp.new_report("cache", job.algebra, N, config.as_dict())
    c = job.cache
    rp.add_section(rep, "resolution entry", True, file=c.resolution_path(job.algebra, N).name)
    rp.add_section(rep, "lifting entry", True, file=c.liftings_path(job.algebra, N).name,
                   liftings=len(job.engine.stored_liftings()))
    return rp.finalize(rep)


COMMANDS = {"ext": cmd_ext, "bracket": cmd_bracket, "verify": cmd_verify, "cache": cmd_cache}


def run(command: str, config: JobConfig) -> tuple[int, dict]:
    """Run one command; returns (exit code, report)."""
    rep = COMMANDS[command](config)
    if config.report_path is not None:
        config.report_path.write_text(rp.dumps(rep))
    return (0 if rep["passed"] else 4), rep


# click wiring -----------------------------------------------------------------------


def _options(f):
    f = click.option("--report", "report_path", type=click.Path(dir_okay=False, path_type=Path),
                     help="Write the gw-report/1 JSON document here.")(f)
    f = click.option("--cache", "cache_dir", type=click.Path(file_okay=False, path_type=Path),
                     help="Resolution and lifting cache directory.")(f)
    f = click.option("--verify", "verify", default=None,
                     help="Comma list: schwede-hermann, diamond, factorizing, power-flat=R.")(f)
    f = click.option("--pairs", "pairs", multiple=True, help="Degree pairs m,k (repeatable).")(f)
    f = click.option("--max-degree", "N", type=int, required=True, help="Truncation window N.")(f)
    f = click.option("--algebra", "algebra", type=click.Path(dir_okay=False, path_type=Path), required=True,
                     help="gw-algebra/1 or gw-quiver/1 file.")(f)
    return f


@click.group()
def cli():
    """Gerstenhaber brackets and extension-category checks over F_p."""


def _make_command(name):
    @cli.command(name=name, help=(COMMANDS[name].__doc__ or name))
    @_options
    def command(algebra, N, pairs, verify, cache_dir, report_path):
        config = JobConfig(algebra, N, parse_pairs(pairs), parse_verify(verify), cache_dir, report_path)
        code, rep = run(name, config)
        click.echo(rp.render_text(rep), nl=False)
        sys.exit(code)
    return command


for _name in COMMANDS:
    _make_command(_name)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="gerstenwerk", standalone_mode=False)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.ClickException as e:
        e.show()
        sys.exit(2)
    except GerstenwerkError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(e.exit_code)
    except (OSError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    sys.exit(0)


if __name__ == "__main__":
    main()
