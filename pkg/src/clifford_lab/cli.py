"""Command-line front end.

Every command builds a :class:`ReportEnvelope` (JSON) or a flat table (CSV)
and exits 0 when all pass/fail checks pass, 1 when any fails and 2 on
invalid input. CSV columns per command:

    clifford    n,m,k,sigma_k
    delta       n,k,variant,root_x,delta
    profile     t,lambda,lambdadot,energy,density
    sweep       n,lambda0,lambda_min,lambda_max,minA2,maxA2,period,sigma1,sigmaK,perdomo_margin,keyeq_residual
    curvature4  label,scalar,ricci_sq,weyl_sq,tracefree_ricci_sq,gbc_integrand,lcf,einstein
    verify      name,status,value,tolerance,relation
    suite       name,status,value,tolerance,relation

Options may also come from a ``key=value`` file given by ``--config`` or the
CLIFFORD_LAB_CONFIG environment variable; command-line flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from . import __version__, checks, clifford, measure, otsuki, pinching, spectra

CONFIG_ENV = "CLIFFORD_LAB_CONFIG"
COMMANDS = ("clifford", "delta", "profile", "verify", "sweep", "curvature4", "suite")
SWEEP_COLUMNS = (
    "n", "lambda0", "lambda_min", "lambda_max", "minA2", "maxA2",
    "period", "sigma1", "sigmaK", "perdomo_margin", "keyeq_residual",
)
CHECK_COLUMNS = ("name", "status", "value", "tolerance", "relation")


class UsageError(ValueError):
    """Invalid command-line or configuration input (exit code 2)."""


@dataclass
class RunConfig:
    command: str = "suite"
    n: int = 3
    m: int = 1
    k: int = 2
    kmax: int = 4
    lambda0: Optional[str] = None
    step: float = otsuki.DEFAULT_STEP
    variant: str = "corrected"
    out: str = "-"
    format: str = "json"
    seed: int = 42
    spectrum: Optional[str] = None
    jobs: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.variant not in pinching.VARIANTS:
            raise UsageError(f"variant must be one of {pinching.VARIANTS}")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        if not self.step > 0:
            raise UsageError("step must be positive")
        if self.seed < 0:
            raise UsageError("seed must be unsigned")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.command == "clifford" and not (self.n >= 2 and 1 <= self.m <= self.n - 1 and self.k >= 1):
            raise UsageError("clifford needs n >= 2, 1 <= m <= n-1, k >= 1")
        if self.command in ("delta", "profile", "verify", "sweep") and self.n < 3:
            raise UsageError(f"{self.command} needs n >= 3")
        if self.command in ("delta", "verify") and self.kmax < 2:
            raise UsageError("kmax must be >= 2")
        if self.command == "sweep" and self.k < 2:
            raise UsageError("sweep needs k >= 2")

    def lambda0_values(self) -> list[float]:
        """lambda0 as a single value or ``start:stop:count``; defaults scale with n."""
        lam_e = otsuki.equilibrium(self.n)
        text = self.lambda0
        if text is None:
            if self.command == "sweep":
                return list(np.linspace(0.7 * lam_e, 1.3 * lam_e, 13))
            return [0.9 * lam_e]
        parts = str(text).split(":")
        try:
            if len(parts) == 1:
                values = [float(parts[0])]
            elif len(parts) == 3:
                count = int(parts[2])
                if count < 2:
                    raise UsageError("range count must be >= 2")
                values = list(np.linspace(float(parts[0]), float(parts[1]), count))
            else:
                raise UsageError(f"bad lambda0 {text!r}; use a number or start:stop:count")
        except ValueError as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(f"bad lambda0 {text!r}") from None
        if any(not v > 0 for v in values):
            raise UsageError("lambda0 must be positive")
        return [float(v) for v in values]


@dataclass
class ReportEnvelope:
    tool_version: str
    config: dict
    results: dict
    checks: list

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        data = json.loads(text)
        return cls(data["tool_version"], data["config"], data["results"], data["checks"])

    @property
    def exit_code(self) -> int:
        return 1 if any(c["status"] == checks.FAIL for c in self.checks) else 0


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return ""
    return str(value)


def emit_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def emit_json(envelope: ReportEnvelope) -> str:
    return envelope.to_json()


def _clean(obj):
    """Recursively convert to JSON-native types with string keys."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x} in report")
        return x
    return obj


# ---------------------------------------------------------------- commands


def _profile_summary(prof: otsuki.OtsukiProfile) -> dict:
    return {
        "n": prof.n,
        "lambda0": prof.lam0,
        "lambda_min": prof.lam_min,
        "lambda_max": prof.lam_max,
        "period": prof.period,
        "period_quadrature": None if prof.degenerate else otsuki.period_quadrature(prof.n, prof.lam0),
        "energy": prof.energy,
        "energy_drift": prof.energy_drift,
        "closure_error": prof.closure_error,
        "samples": len(prof.t),
        "step": prof.step,
        "degenerate": prof.degenerate,
    }


def cmd_clifford(cfg: RunConfig):
    model = clifford.clifford_model(cfg.n, cfg.m)
    spec = model.spectrum
    a2 = spectra.power_sum(spec, 2)
    sig = {k: clifford.clifford_sigma(cfg.n, cfg.m, k) for k in range(1, cfg.k + 1)}
    results = {
        "n": cfg.n,
        "m": cfg.m,
        "radii": list(model.radii),
        "spectrum": spectra.spectrum_to_list(spec),
        "abs_A2": a2,
        "volume": clifford.clifford_volume(cfg.n, cfg.m),
        "euler_characteristic": clifford.clifford_euler(cfg.n, cfg.m),
        "sigma": sig,
    }
    out = [
        checks.check_le("minimal_trace", abs(spec.trace), spectra.MINIMAL_TOL),
        checks.check_le("abs_A2_equals_n", abs(a2 - cfg.n), 1e-13),
        checks.check_true("sigma_k_equals_n_pow_k", all(v == cfg.n**k for k, v in sig.items())),
        checks.check_le("radii_squared_sum_to_one", abs(model.radii[0] ** 2 + model.radii[1] ** 2 - 1.0), 1e-15),
    ]
    if cfg.n == 4:
        lhs, rhs = clifford.clifford_gbc_check(cfg.m)
        results["gbc"] = {"lhs": lhs, "rhs": rhs}
        out.append(checks.check_le("gbc_integral", checks.rel_err(lhs, rhs, clifford.SIXTEEN_PI_SQ), 1e-10))
    rows = [{"n": cfg.n, "m": cfg.m, "k": k, "sigma_k": v} for k, v in sig.items()]
    return results, out, (("n", "m", "k", "sigma_k"), rows)


def cmd_delta(cfg: RunConfig):
    table = pinching.monotonicity_table(cfg.n, cfg.kmax, cfg.variant)
    d = table.deltas()
    out = [
        checks.check_le("delta2_closed_form", abs(d[0] - cfg.n * (cfg.n - 2) / (cfg.n + 2)), 1e-12),
        checks.check_true("strictly_decreasing", all(b < a for a, b in zip(d, d[1:]))),
        checks.check_true("all_below_n", all(x < cfg.n for x in d)),
        checks.check_true(
            "root_below_clifford_value",
            all(pinching.pinching_poly(cfg.n, e.k, 1.0 / (cfg.n - 1), cfg.variant) > 0 for e in table.entries),
        ),
    ]
    return table.as_dict(), out, (("n", "k", "variant", "root_x", "delta"), table.csv_rows())


def cmd_profile(cfg: RunConfig):
    lam0 = cfg.lambda0_values()[0]
    prof = otsuki.integrate_profile(cfg.n, lam0, cfg.step)
    report = measure.sigma_report(prof, max(cfg.kmax, 2), cfg.variant)
    results = {"profile": _profile_summary(prof), "sigma_report": report.as_dict()}
    out = [checks.check_le("energy_drift", prof.energy_drift, otsuki.DRIFT_TOL)]
    if not prof.degenerate:
        t_quad = otsuki.period_quadrature(cfg.n, lam0)
        out.append(checks.check_le("period_vs_quadrature", abs(prof.period - t_quad), 1e-7))
    density = measure.leaf_density(prof.n, prof.lam, prof.lam[0])
    energy = prof.energies()
    rows = [
        {"t": prof.t[j], "lambda": prof.lam[j], "lambdadot": prof.lamdot[j], "energy": energy[j], "density": density[j]}
        for j in range(len(prof.t))
    ]
    return results, out, (("t", "lambda", "lambdadot", "energy", "density"), rows)


def cmd_verify(cfg: RunConfig):
    lam0 = cfg.lambda0_values()[0]
    prof = otsuki.integrate_profile(cfg.n, lam0, cfg.step)
    n = cfg.n
    kmax = cfg.kmax
    rep = measure.sigma_report(prof, kmax, cfg.variant)
    funcs = [measure.f_k(n, k) for k in range(2, kmax + 1)] + [measure.power_function(2.0), measure.log_function()]
    keyeq = {f.label: measure.verify_keyeq(prof, f).residual for f in funcs}
    idents = {k: measure.verify_sigma_identity(prof, k, "corrected") for k in range(2, kmax + 1)}
    out = [
        checks.check_le("keyeq_residual", max(keyeq.values()), 1e-6),
        checks.check_le("sigma_identity_residual", max(i.residual for i in idents.values()), 1e-6),
        checks.check_ge("perdomo_margin", rep.perdomo_margin, -1e-8),
        checks.check_le("simons_pointwise", rep.simons_pointwise_max, 1e-8),
        checks.check_le("simons_integrated", rep.simons_integrated_residual, 1e-8),
        checks.check_ge(
            "jensen_sigma_k_ge_sigma1_pow_k",
            min(rep.sigma[k] - rep.sigma[1] ** k for k in range(2, kmax + 1)),
            -1e-9,
        ),
    ]
    pinched = {}
    for k in range(2, kmax + 1):
        delta = pinching.delta_k(n, k)
        applies = rep.minA2 >= delta
        pinched[k] = {"delta": delta, "applies": applies, "sigma_k_minus_nk": rep.sigma[k] - float(n) ** k}
        if applies:
            out.append(checks.check_ge(f"pinching_k{k}", rep.sigma[k] - float(n) ** k, -1e-7))
    printed = {}
    if not prof.degenerate:
        for k in range(3, kmax + 1):
            printed[k] = {
                "keyeq_residual": measure.verify_keyeq(prof, measure.f_k(n, k, "printed"), strict=False).residual,
                "sigma_identity_residual": measure.verify_sigma_identity(prof, k, "printed").residual,
            }
            out.append(checks.report(f"printed_variant_keyeq_k{k}", printed[k]["keyeq_residual"]))
        out.append(checks.report("simons_printed_coefficient", measure.simons_pointwise(prof, "printed")))
    results = {
        "profile": _profile_summary(prof),
        "sigma_report": rep.as_dict(),
        "keyeq": keyeq,
        "sigma_identity": {k: asdict(v) for k, v in idents.items()},
        "pinching": pinched,
        "printed_variants": printed,
    }
    if n == 4:
        val = measure.euler_integral_n4(prof)
        results["euler_integral_n4"] = val
        out.append(checks.report("euler_integral_n4", val))
    return results, out, None


def sweep_row(args) -> dict:
    n, lam0, step, k = args
    prof = otsuki.integrate_profile(n, lam0, step)
    a2 = prof.abs_A2
    return {
        "n": n,
        "lambda0": lam0,
        "lambda_min": prof.lam_min,
        "lambda_max": prof.lam_max,
        "minA2": float(a2.min()),
        "maxA2": float(a2.max()),
        "period": prof.period,
        "sigma1": measure.sigma_k(prof, 1),
        "sigmaK": measure.sigma_k(prof, k),
        "perdomo_margin": measure.perdomo_margin(prof),
        "keyeq_residual": measure.verify_keyeq(prof, measure.f_k(n, k)).residual,
    }


def cmd_sweep(cfg: RunConfig):
    lams = sorted(cfg.lambda0_values())
    # fail fast on guard violations before any work is farmed out
    for lam0 in lams:
        if not otsuki.is_equilibrium(cfg.n, lam0):
            otsuki.check_amplitude(cfg.n, lam0)
    tasks = [(cfg.n, lam0, cfg.step, cfg.k) for lam0 in lams]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(sweep_row, tasks))
    else:
        rows = [sweep_row(t) for t in tasks]
    out = [
        checks.check_ge("perdomo_margin_min", min(r["perdomo_margin"] for r in rows), -1e-8),
        checks.check_le("keyeq_residual_max", max(r["keyeq_residual"] for r in rows), 1e-6),
    ]
    return {"k": cfg.k, "rows": rows}, out, (SWEEP_COLUMNS, rows)


def _curvature_row(label: str, spec: spectra.PrincipalSpectrum) -> dict:
    closed = spectra.curvature_invariants_dim4(spec)
    oracle = spectra.curvature_tensor_oracle(spec)
    forms = spectra.gbc_integrand(spec)
    cls = spectra.classify(spec)
    return {
        "label": label,
        "spectrum": spectra.spectrum_to_list(spec),
        **closed.as_dict(),
        "oracle": oracle.as_dict(),
        "gbc_forms": list(forms),
        "lcf": cls.lcf,
        "einstein": cls.einstein,
        "lcf_residual": cls.lcf_residual,
        "einstein_residual": cls.einstein_residual,
    }


def cmd_curvature4(cfg: RunConfig):
    if cfg.spectrum:
        try:
            cases = [("input", spectra.spectrum_from_text(cfg.spectrum))]
        except ValueError as exc:
            raise UsageError(f"bad spectrum {cfg.spectrum!r}: {exc}") from None
    else:
        rng = np.random.default_rng(cfg.seed)
        cases = [
            ("S4", spectra.PrincipalSpectrum.zero(4)),
            ("S2xS2", clifford.clifford_spectrum(4, 2)),
            ("S1xS3", clifford.clifford_spectrum(4, 1)),
            (f"random_seed{cfg.seed}", spectra.random_minimal_spectrum(rng)),
        ]
    for _, spec in cases:
        if spec.n != 4 or not spec.is_minimal:
            raise UsageError("curvature4 needs a minimal spectrum with n = 4")
    rows = [_curvature_row(label, spec) for label, spec in cases]
    keys = ("scalar", "ricci_sq", "weyl_sq", "tracefree_ricci_sq", "gbc_integrand")
    worst_oracle = max(checks.rel_err(r[key], r["oracle"][key]) for r in rows for key in keys)
    worst_forms = max(checks.rel_err(*r["gbc_forms"]) for r in rows)
    out = [
        checks.check_le("closed_forms_vs_oracle", worst_oracle, 1e-9),
        checks.check_le("gbc_forms_agree", worst_forms, 1e-10),
    ]
    columns = ("label",) + keys + ("lcf", "einstein")
    return {"spectra": rows}, out, (columns, rows)


def cmd_suite(cfg: RunConfig):
    results, out = checks.run_suite(cfg.seed, cfg.step)
    return results, out, None


HANDLERS = {
    "clifford": cmd_clifford,
    "delta": cmd_delta,
    "profile": cmd_profile,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "curvature4": cmd_curvature4,
    "suite": cmd_suite,
}


def run(cfg: RunConfig) -> tuple[ReportEnvelope, str]:
    """Execute a validated config; returns the envelope and the rendered output."""
    cfg.validate()
    results, check_list, table = HANDLERS[cfg.command](cfg)
    envelope = ReportEnvelope(
        tool_version=__version__,
        config=_clean({k: v for k, v in asdict(cfg).items() if k != "out"}),
        results=_clean(results),
        checks=_clean([c.as_dict() for c in check_list]),
    )
    if cfg.format == "csv":
        if table is None:
            text = emit_csv(CHECK_COLUMNS, envelope.checks)
        else:
            columns, rows = table
            text = emit_csv(columns, rows)
    else:
        text = emit_json(envelope)
    return envelope, text


# ------------------------------------------------------------- arg parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value config file (flags override it)")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--kmax", type=int)
    common.add_argument("--lambda0", help="value or start:stop:count")
    common.add_argument("--step", type=float)
    common.add_argument("--variant", choices=pinching.VARIANTS)
    common.add_argument("--out", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--seed", type=int)
    common.add_argument("--spectrum", help="curvature4 input, e.g. '1:2,-1:2'")
    common.add_argument("--jobs", type=int, help="worker processes for sweep")

    parser = _Parser(prog="clifford-lab", description="Verification runs for Clifford hypersurface identities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "clifford": "exact Clifford model S^m x S^(n-m)",
        "delta": "pinching constants delta_k(n)",
        "profile": "integrate one Otsuki profile",
        "verify": "integral identities on one profile",
        "sweep": "profile quantities over a lambda0 range",
        "curvature4": "n=4 curvature invariants vs tensor oracle",
        "suite": "every acceptance check",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        values[key.strip()] = value.strip()
    return values


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    types = {f.name: f.type for f in fields(RunConfig)}
    merged: dict = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        for key, value in read_config_file(path).items():
            if key not in types or key == "command":
                raise UsageError(f"unknown config key {key!r}")
            merged[key] = value
    for key in types:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    cfg = RunConfig(command=args.command)
    defaults = RunConfig()
    for key, value in merged.items():
        if key == "command":
            continue
        target = type(getattr(defaults, key))
        try:
            if key in ("lambda0", "spectrum"):
                value = str(value)
            elif target is int:
                value = int(value)
            elif target is float:
                value = float(value)
            else:
                value = str(value)
        except ValueError:
            raise UsageError(f"bad value for {key}: {value!r}") from None
        setattr(cfg, key, value)
    return cfg


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def main(argv=None) -> int:
    try:
        try:
            cfg = config_from_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        envelope, text = run(cfg)
        _write(text, cfg.out)
    except (ValueError, otsuki.IntegrationError) as exc:
        # UsageError, AmplitudeGuardError and domain errors all land here
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"clifford-lab: error: {msg}\n")
        return 2
    return envelope.exit_code


if __name__ == "__main__":
    sys.exit(main())
