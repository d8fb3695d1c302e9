"""Batch front end: scenario configs in, JSON verification reports out.

Exit codes: 0 every check passed, 1 some check failed, 2 invalid input.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import click

from . import __version__
from .exact_core import QMat, mat_kernel, rat, rat_str
from .fock import component_basis, dual_form, valid_degree
from .intertwine import (
    duality_check,
    gl_explicit_intertwiner,
    gl_modules,
    hom_space,
    has_invertible,
    kernel_match,
    quotient_module,
    twisted_modules,
)
from .projector import (
    GramResult,
    SingularWeightError,
    degree_of,
    highest_vector_monomial,
    projector_eigen_on_highest,
    shapovalov_gram,
    z_product,
)
from .repclass import (
    conjugate_module,
    delta_label,
    drinfeld_extract,
    drinfeld_forward,
    is_irreducible,
    split_components,
)
from .root_data import RootDatum, datum, longest_word, normal_ordering, weight_is_nonsingular
from .yangian import EvalFactor, check_reflection, check_rtt, check_symmetry, compute_O, tensor_action

TASKS = ("relations", "gram", "eigenvalue", "quotient", "drinfeld", "roundtrip", "duality", "split")
EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
CACHE_ENV = "YFORGE_CACHE_DIR"


class ConfigError(ValueError):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field

    def to_json(self) -> dict:
        return {"error": "invalid_config", "field": self.field, "message": str(self)}


@dataclass(frozen=True)
class Scenario:
    kind: str
    theta: int
    m: int
    n: int
    lam: tuple
    mu: tuple
    tasks: tuple
    name: str = ""

    @property
    def twisted(self) -> bool:
        return self.kind != "gl"

    def metadata(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "theta": self.theta,
            "m": self.m,
            "n": self.n,
            "lam": [rat_str(v) for v in self.lam],
            "mu": [rat_str(v) for v in self.mu],
            "tasks": list(self.tasks),
        }


def _int_field(config: dict, key: str) -> int:
    value = config.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer", key)
    return value


def _labels(config: dict, key: str, m: int) -> tuple:
    value = config.get(key)
    if not isinstance(value, list):
        raise ConfigError(f"{key} must be a list of rationals", key)
    if len(value) != m:
        raise ConfigError(f"{key} must have {m} labels", key)
    try:
        return tuple(rat(v) for v in value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{key}: {exc}", key) from exc


def parse_scenario(config, tasks: Sequence[str] | None = None) -> Scenario:
    """Validate a config mapping; ``tasks`` overrides the config's task list."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    kind = config.get("kind")
    if kind not in ("gl", "sp", "so"):
        raise ConfigError("kind must be gl, sp or so", "kind")
    theta = _int_field(config, "theta")
    if theta not in (1, -1):
        raise ConfigError("theta must be 1 or -1", "theta")
    m = _int_field(config, "m")
    n = _int_field(config, "n")
    if m < 1 or n < 1:
        raise ConfigError("m and n must be positive", "m" if m < 1 else "n")
    if (kind, theta) in (("sp", -1), ("so", 1)) and n % 2:
        raise ConfigError("the dual sp_n needs n even", "n")
    lam = _labels(config, "lam", m)
    mu = _labels(config, "mu", m)
    raw = config.get("tasks", []) if tasks is None else list(tasks)
    if raw == "all":
        raw = list(TASKS)
    if not isinstance(raw, list) or any(t not in TASKS for t in raw):
        raise ConfigError(f"tasks must be a subset of {list(TASKS)}", "tasks")
    ordered = tuple(t for t in TASKS if t in raw)
    name = config.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name must be a string", "name")
    return Scenario(kind, theta, m, n, lam, mu, ordered, name)


def parse_word(text: str | None, d: RootDatum) -> tuple | None:
    if text is None:
        return None
    try:
        word = tuple(int(c) for c in text.replace(" ", "").split(",") if c)
    except ValueError as exc:
        raise ConfigError(f"word must be comma-separated integers: {text}", "word") from exc
    if any(c < 1 or c > d.rank for c in word):
        raise ConfigError(f"word letters must lie in 1..{d.rank}", "word")
    if len(word) != len(d.positive_roots) or len(set(normal_ordering(d, word))) != len(d.positive_roots):
        raise ConfigError("word is not a reduced word for the longest element", "word")
    return word


# ---------------------------------------------------------------------------
# Gram cache


def _cache_key(d: RootDatum, lam, mu, word) -> str:
    payload = json.dumps(
        [d.tag, d.m, d.theta, d.n, [rat_str(v) for v in lam], [rat_str(v) for v in mu], list(word)],
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:32]


def cached_gram(d: RootDatum, lam, mu, word) -> GramResult:
    """shapovalov_gram with an optional on-disk cache under $YFORGE_CACHE_DIR."""
    root = os.environ.get(CACHE_ENV)
    if not root:
        return shapovalov_gram(d, lam, mu, word)
    path = Path(root) / f"gram-{_cache_key(d, lam, mu, word)}.json"
    if path.exists():
        data = json.loads(path.read_text())
        gram = QMat([[rat(c) for c in row] for row in data["gram"]])
        proj = QMat([[rat(c) for c in row] for row in data["projector"]])
        kernel = [tuple(k.col(0)) for k in mat_kernel(gram)] if gram.nrows else []
        nu = tuple(rat(v) for v in data["nu"])
        if all(v.denominator == 1 for v in nu) and gram.nrows:
            nu = tuple(int(v) for v in nu)
        return GramResult(tuple(lam), tuple(mu), nu, gram, kernel, proj)
    res = shapovalov_gram(d, lam, mu, word)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        "nu": [rat_str(v) for v in res.nu],
        "gram": [[rat_str(c) for c in row] for row in res.gram.rows],
        "projector": [[rat_str(c) for c in row] for row in res.projector.rows],
    }
    path.write_text(json.dumps(data, sort_keys=True))
    return res


# ---------------------------------------------------------------------------
# Scenario pipeline


class _Context:
    """Lazily built objects shared by the tasks of one scenario."""

    def __init__(self, sc: Scenario, word: tuple | None):
        self.sc = sc
        self.d = datum(sc.kind, sc.m, sc.theta, sc.n)
        self.word = word if word is not None else longest_word(self.d)
        self._cache: dict = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def nu(self) -> tuple:
        return degree_of(self.d, self.sc.lam, self.sc.mu)

    @property
    def modules(self):
        sc = self.sc

        def build():
            if not valid_degree(sc.theta, sc.n, self.nu):
                raise ConfigError(f"degree {[rat_str(v) for v in self.nu]} is not a valid multidegree", "lam")
            if sc.twisted:
                if sc.theta != -1:
                    raise ConfigError("twisted tensor modules are built for theta = -1 only", "theta")
                return twisted_modules(sc.kind, sc.lam, sc.mu, sc.n)
            return gl_modules(sc.lam, sc.mu, sc.theta, sc.n)

        return self._get("modules", build)

    @property
    def gram(self) -> GramResult:
        return self._get("gram", lambda: cached_gram(self.d, self.sc.lam, self.sc.mu, self.word))

    @property
    def quotient(self):
        def build():
            source = self.modules[0]
            return quotient_module(source, self.gram.kernel, self.sc.twisted)

        return self._get("quotient", build)

    @property
    def parts(self):
        return self._get("parts", lambda: split_components(self.quotient, self.sc.twisted))

    @property
    def forward(self):
        sc = self.sc
        return self._get("forward", lambda: drinfeld_forward(sc.kind, sc.lam, sc.mu, self.nu, sc.n))


def _task_relations(ctx: _Context) -> dict:
    source, target, _ = ctx.modules
    out = {"source_dimension": source.dimension}
    if not ctx.sc.twisted:
        ok_s, bad_s = check_rtt(source)
        ok_t, bad_t = check_rtt(target)
        out.update(rtt_source=ok_s, rtt_target=ok_t, passed=ok_s and ok_t)
        if not out["passed"]:
            out["counterexample"] = {"indices": list(bad_s or bad_t)}
        return out
    form = source.form
    out["passed"] = True
    for label, mod in (("source", source), ("target", target)):
        ok, bad = check_reflection(form, mod)
        sym = check_symmetry(form, mod.series(True))
        o = compute_O(form, mod.series(True))
        out[f"reflection_{label}"] = ok
        out[f"symmetry_{label}"] = sym
        out[f"O_{label}"] = {"num": o.num.to_json(), "den": o.den.to_json()}
        if not (ok and sym):
            out["passed"] = False
            out.setdefault("counterexample", {"module": label, "indices": list(bad) if bad else None})
    return out


def _task_gram(ctx: _Context) -> dict:
    g = ctx.gram
    return {
        "nu": [rat_str(v) for v in g.nu],
        "dimension": g.dimension,
        "kernel_dim": len(g.kernel),
        "quotient_dim": g.quotient_dim,
        "symmetric": g.gram == g.gram.T,
        "passed": g.gram == g.gram.T,
    }


def _task_eigenvalue(ctx: _Context) -> dict:
    sc, d = ctx.sc, ctx.d
    z = projector_eigen_on_highest(d, sc.lam, sc.mu, ctx.word)
    expected = z_product(d, sc.lam, sc.mu, signed=False)
    out = {"eigenvalue": rat_str(z), "z_product": rat_str(expected), "passed": z == expected}
    if not sc.twisted and sc.theta == -1:
        op = gl_explicit_intertwiner(sc.lam, sc.mu, sc.theta, sc.n, ctx.word, check=False)
        nu = tuple(int(v) for v in ctx.nu)
        src = _highest_coords(d, nu)
        tgt = _highest_coords(d, tuple(reversed(nu)))
        img = op.matrix.apply(src)
        signed = z_product(d, sc.lam, sc.mu, signed=True)
        out["operator_on_highest"] = all(a == signed * b for a, b in zip(img, tgt))
        out["passed"] = out["passed"] and out["operator_on_highest"]
    if not out["passed"]:
        out["counterexample"] = {"lam": [rat_str(v) for v in sc.lam], "mu": [rat_str(v) for v in sc.mu]}
    return out


def _highest_coords(d: RootDatum, nu: tuple) -> tuple:
    comp = component_basis(d.theta, d.m, d.n, nu)
    mono = highest_vector_monomial(d, nu)
    vec = [Fraction(0)] * comp.dimension
    vec[comp.index[mono]] = Fraction(1)
    return tuple(vec)


def _task_quotient(ctx: _Context) -> dict:
    sc = ctx.sc
    source = ctx.modules[0]
    g = ctx.gram
    q = ctx.quotient
    if sc.twisted:
        match = kernel_match(None, g, True, source)
    elif sc.theta == -1:
        op = gl_explicit_intertwiner(sc.lam, sc.mu, sc.theta, sc.n, ctx.word)
        match = kernel_match(op, g)
    else:
        match = True
    irreducible = is_irreducible(q, sc.twisted)
    return {
        "dimension": q.dimension,
        "kernel_dim": len(g.kernel),
        "kernel_match": match,
        "irreducible": irreducible,
        "passed": match and q.dimension == g.quotient_dim,
    }


def _drinfeld_records(ctx: _Context) -> list[dict]:
    if is_irreducible(ctx.quotient, ctx.sc.twisted):
        return [drinfeld_extract(ctx.quotient, ctx.sc.twisted).to_json()]
    return [drinfeld_extract(p, ctx.sc.twisted).to_json() for p in ctx.parts]


def _task_drinfeld(ctx: _Context) -> dict:
    records = _drinfeld_records(ctx)
    return {"extracted": records, "forward": ctx.forward.to_json(), "passed": True}


def _task_roundtrip(ctx: _Context) -> dict:
    records = _drinfeld_records(ctx)
    forward = ctx.forward.to_json()
    same = all(r["polys"] == forward["polys"] for r in records)
    out = {"extracted": records, "forward": forward, "summands": len(records), "passed": same}
    if len(records) == 2:
        out["deltas"] = sorted(r.get("delta") for r in records)
        out["passed"] = same and out["deltas"] == [-1, 1] and bool(ctx.forward.conditions.get("split"))
    if not out["passed"]:
        out["counterexample"] = {"extracted": records, "forward": forward["polys"]}
    return out


def _task_duality(ctx: _Context) -> dict:
    source, target, _ = ctx.modules
    ok = duality_check(source, target, ctx.sc.twisted)
    return {"dual_source_maps_to_target": ok, "passed": ok}


def _task_split(ctx: _Context) -> dict:
    sc = ctx.sc
    q = ctx.quotient
    parts = ctx.parts
    out = {"summands": len(parts), "dimensions": [p.dimension for p in parts]}
    if sc.kind != "so" or sc.n % 2:
        out["passed"] = len(parts) == 1
        return out
    deltas = [delta_label(p) for p in parts]
    out["deltas"] = deltas
    out["commutant_dim"] = len(parts)
    if len(parts) == 2:
        swapped = hom_space(conjugate_module(parts[0]), parts[1], True)
        out["conjugation_exchanges"] = has_invertible(swapped)
        out["passed"] = sorted(deltas) == [-1, 1] and out["conjugation_exchanges"]
    else:
        out["passed"] = is_irreducible(q, True)
    return out


_RUNNERS = {
    "relations": _task_relations,
    "gram": _task_gram,
    "eigenvalue": _task_eigenvalue,
    "quotient": _task_quotient,
    "drinfeld": _task_drinfeld,
    "roundtrip": _task_roundtrip,
    "duality": _task_duality,
    "split": _task_split,
}


def run_scenario(config, tasks: Sequence[str] | None = None, word: str | None = None, timing: bool = False) -> dict:
    """Run the requested tasks in dependency order; raises ConfigError on invalid input."""
    sc = parse_scenario(config, tasks)
    d = datum(sc.kind, sc.m, sc.theta, sc.n)
    parsed_word = parse_word(word, d)
    report = {"version": __version__, "scenario": sc.metadata(), "results": {}}
    if not sc.tasks:
        report["passed"] = True
        return report
    if not weight_is_nonsingular(d, sc.lam):
        raise ConfigError("lam + rho is singular", "lam")
    ctx = _Context(sc, parsed_word)
    for task in sc.tasks:
        start = time.perf_counter()
        try:
            record = _RUNNERS[task](ctx)
        except ConfigError:
            raise
        except (AssertionError, ArithmeticError, SingularWeightError, ValueError) as exc:
            record = {"passed": False, "counterexample": {"error": type(exc).__name__, "message": str(exc)}}
        if timing:
            record["seconds"] = f"{time.perf_counter() - start:.3f}"
        report["results"][task] = record
    report["passed"] = all(r["passed"] for r in report["results"].values())
    return report


def random_relation_checks(seed: int, count: int = 3) -> dict:
    """RTT on random evaluation modules with n in {2, 3}; deterministic per seed."""
    rng = random.Random(seed)
    cases = []
    ok_all = True
    for _ in range(count):
        n = rng.choice((2, 3))
        k = rng.randint(0, n)
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        ok, _ = check_rtt(tensor_action(dual_form("gl", -1, n), [EvalFactor(k, t)]))
        cases.append({"n": n, "k": k, "t": rat_str(t), "rtt": ok})
        ok_all = ok_all and ok
    return {"seed": seed, "cases": cases, "passed": ok_all}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run_suite(directory: Path, out: Path | None = None, word: str | None = None) -> tuple[dict, int]:
    """Run every *.json config in a directory; exit 0 iff all scenarios pass."""
    index = {"scenarios": {}, "passed": True}
    code = EXIT_PASS
    for path in sorted(Path(directory).glob("*.json")):
        entry: dict
        try:
            config = json.loads(path.read_text())
            report = run_scenario(config, word=word)
            entry = {"passed": report["passed"]}
            if not report["passed"]:
                entry["failed_tasks"] = [t for t, r in report["results"].items() if not r["passed"]]
                code = max(code, EXIT_FAIL)
        except (OSError, json.JSONDecodeError) as exc:
            report = {"error": "io", "message": str(exc)}
            entry = {"passed": False, "error": "io"}
            code = max(code, EXIT_FAIL)
        except ConfigError as exc:
            report = exc.to_json()
            entry = {"passed": False, "error": "invalid_config"}
            code = max(code, EXIT_FAIL)
        index["scenarios"][path.stem] = entry
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{path.stem}.json").write_text(dumps(report))
    index["passed"] = code == EXIT_PASS
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "index.json").write_text(dumps(index))
    return index, code


# ---------------------------------------------------------------------------
# Click front end


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_config(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}", "config") from exc


def _run_command(config: str, out: str | None, tasks, word: str | None = None, timing: bool = False, extra=None) -> None:
    try:
        report = run_scenario(_load_config(config), tasks, word, timing)
    except ConfigError as exc:
        _emit(dumps(exc.to_json()), out)
        sys.exit(EXIT_INVALID)
    if extra is not None:
        report["random"] = extra
        report["passed"] = report["passed"] and extra["passed"]
    _emit(dumps(report), out)
    sys.exit(EXIT_PASS if report["passed"] else EXIT_FAIL)


config_option = click.option("--config", "config", required=True, type=click.Path(dir_okay=False), help="Scenario JSON.")
out_option = click.option("--out", "out", type=click.Path(), default=None, help="Write the report here instead of stdout.")
word_option = click.option("--word", "word", default=None, help="Reduced word for the longest element, e.g. 1,2,1.")
timing_option = click.option("--timing", is_flag=True, help="Add per-task wall times (breaks byte-identical output).")


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Exact checks for extremal projectors and Yangian modules."""


@main.command("run")
@config_option
@out_option
@word_option
@timing_option
def run_cmd(config, out, word, timing):
    """Run the tasks listed in the config."""
    _run_command(config, out, None, word, timing)


@main.command("check-relations")
@config_option
@out_option
@click.option("--seed", type=int, default=None, help="Also check RTT on random evaluation modules.")
def check_relations_cmd(config, out, seed):
    """RTT or reflection/symmetry relations on the source and target modules."""
    extra = random_relation_checks(seed) if seed is not None else None
    _run_command(config, out, ["relations"], extra=extra)


@main.command("build-module")
@config_option
@out_option
def build_module_cmd(config, out):
    """Build the source and target tensor modules and report their factors."""
    try:
        sc = parse_scenario(_load_config(config), [])
        ctx = _Context(sc, None)
        source, target, nu = ctx.modules
    except ConfigError as exc:
        _emit(dumps(exc.to_json()), out)
        sys.exit(EXIT_INVALID)

    def factors(mod):
        return [{"k": f.k, "t": rat_str(f.t)} for f in mod.factors]

    report = {
        "version": __version__,
        "scenario": sc.metadata(),
        "nu": [int(v) for v in nu],
        "source": {"dimension": source.dimension, "factors": factors(source)},
        "target": {"dimension": target.dimension, "factors": factors(target)},
        "passed": True,
    }
    _emit(dumps(report), out)


@main.command("gram")
@config_option
@out_option
@word_option
def gram_cmd(config, out, word):
    """Gram matrix of the degree component and its kernel."""
    _run_command(config, out, ["gram"], word)


@main.command("drinfeld")
@config_option
@out_option
def drinfeld_cmd(config, out):
    """Drinfeld or Q polynomials of the irreducible quotient."""
    _run_command(config, out, ["quotient", "drinfeld"])


@main.command("roundtrip")
@config_option
@out_option
@word_option
def roundtrip_cmd(config, out, word):
    """Gram kernel, quotient, extraction and comparison with the forward formulas."""
    _run_command(config, out, ["gram", "quotient", "roundtrip"], word)


@main.command("suite")
@click.argument("directory", type=click.Path(file_okay=False, exists=True))
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Directory for per-scenario reports.")
@word_option
def suite_cmd(directory, out, word):
    """Run every scenario config in a directory."""
    index, code = run_suite(Path(directory), Path(out) if out else None, word)
    click.echo(dumps(index), nl=False)
    sys.exit(code)


if __name__ == "__main__":
    main()
