"""Experiment configuration and report serialization.

Config files are INI-style (key = value under section headers) with arrays
in JSON brackets.  The fixed CSV schema is

    experiment,B,q_or_P,w1,w2,w3,w4,value_re,value_im,bound,ratio,seconds

with empty fields for inapplicable columns; the JSON report mirrors the
rows and adds the summary map and the overall pass flag.  Output is
deterministic for a fixed config and seed up to the timestamp header line.
"""

from __future__ import annotations

import configparser
import json
import time
from dataclasses import dataclass, field

from .errors import ConfigError
from .forms import FormPair

EXPERIMENTS = (
    "verify",
    "count",
    "charsum",
    "delta-check",
    "tq-bound",
    "lemma41-check",
    "sieve-assembly",
    "decay-report",
)

CSV_COLUMNS = (
    "experiment", "B", "q_or_P", "w1", "w2", "w3", "w4",
    "value_re", "value_im", "bound", "ratio", "seconds",
)

DEFAULT_TOLERANCES = {
    "delta_exact": 1e-9,
    "gauss_rel": 1e-6,
    "crt_rel": 1e-5,
    "tol_rel": 0.02,   # two-route twisted-count agreement
    "C_T": 10.0,
    "C_sieve": 4.0,
    "exponent_max": 1.8,
    "oscint_cross": 2e-6,
}


def _parse_value(text: str):
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    for caster in (int, float):
        try:
            return caster(text)
        except ValueError:
            continue
    return text


@dataclass
class ExperimentConfig:
    pair: FormPair
    experiment: str
    B_grid: list[int] = field(default_factory=list)
    q_list: list[int] = field(default_factory=list)
    Q_list: list[float] = field(default_factory=list)
    n_max: int = 100
    c_list: list[int] = field(default_factory=list)
    w: tuple[int, int, int, int] = (0, 0, 0, 0)
    P_policy: str = "cbrt"  # or "fixed <int>"
    seed: int = 20260810
    threads: int = 1
    suites: list[str] = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    output_path: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}"
            )
        merged = dict(DEFAULT_TOLERANCES)
        merged.update(self.tolerances)
        self.tolerances = merged

    def fixed_P(self) -> int | None:
        parts = self.P_policy.split()
        if parts[0] == "fixed":
            if len(parts) != 2:
                raise ConfigError("P_policy 'fixed' needs a value, e.g. 'fixed 4'")
            return int(parts[1])
        if parts[0] == "cbrt":
            return None
        raise ConfigError(f"unknown P_policy {self.P_policy!r}")

    @classmethod
    def from_file(cls, path: str, overrides: dict | None = None) -> "ExperimentConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path!r}")
        try:
            a = _parse_value(parser.get("pair", "a"))
            b = _parse_value(parser.get("pair", "b"))
            pair = FormPair(tuple(a), tuple(b))
        except (configparser.Error, TypeError, ValueError) as exc:
            raise ConfigError(f"bad [pair] section: {exc}") from exc
        if not parser.has_section("run") or not parser.has_option("run", "experiment"):
            raise ConfigError("missing [run] experiment")
        kwargs: dict = {"pair": pair, "experiment": parser.get("run", "experiment")}
        simple = {
            "B_grid": "B_grid", "q_list": "q_list", "Q_list": "Q_list",
            "n_max": "n_max", "c_list": "c_list", "w": "w",
            "P_policy": "P_policy", "seed": "seed", "threads": "threads",
            "suites": "suites",
        }
        for attr, key in simple.items():
            if parser.has_option("run", key):
                val = _parse_value(parser.get("run", key))
                if attr == "w":
                    val = tuple(int(x) for x in val)
                kwargs[attr] = val
        if parser.has_section("tolerances"):
            kwargs["tolerances"] = {
                k: _parse_value(v) for k, v in parser.items("tolerances")
            }
        if parser.has_section("output") and parser.has_option("output", "path"):
            kwargs["output_path"] = parser.get("output", "path")
        cfg = cls(**kwargs)
        for key, val in (overrides or {}).items():
            if val is not None:
                setattr(cfg, key, val)
        return cfg


def record(experiment: str, **kw) -> dict:
    """One CSV/JSON row in the fixed schema (missing fields left empty)."""
    row = {col: "" for col in CSV_COLUMNS}
    row["experiment"] = experiment
    for key, val in kw.items():
        if key not in row:
            raise KeyError(f"unknown record column {key!r}")
        row[key] = val
    return row


@dataclass
class Report:
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    passed: bool = True
    inconclusive: bool = False
    failures: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = ""):
        if not ok:
            self.passed = False
            self.failures.append(f"{name}: {detail}" if detail else name)

    def merge(self, other: "Report"):
        self.records.extend(other.records)
        self.summary.update(other.summary)
        self.passed = self.passed and other.passed
        self.inconclusive = self.inconclusive or other.inconclusive
        self.failures.extend(other.failures)

    @property
    def exit_code(self) -> int:
        if self.inconclusive:
            return 3
        return 0 if self.passed else 1


def _fmt(val) -> str:
    if isinstance(val, float):
        return f"{val:.12g}"
    return str(val)


def sort_records(records: list[dict], columns=CSV_COLUMNS) -> list[dict]:
    return sorted(records, key=lambda r: tuple(_fmt(r.get(c, "")) for c in columns))


def write_csv(report: Report, path: str, columns=CSV_COLUMNS,
              blank_columns=("seconds",)):
    """Write the report rows; deterministic for a fixed config and seed.

    Wall-clock columns are blanked by default so reruns are byte-identical
    below the timestamp header; timings stay available in the JSON report.
    """
    with open(path, "w") as fh:
        fh.write(f"# generated={time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        fh.write(",".join(columns) + "\n")
        for row in sort_records(report.records, columns):
            fh.write(",".join(
                "" if c in blank_columns else _fmt(row.get(c, ""))
                for c in columns
            ) + "\n")


def write_json(report: Report, path: str):
    payload = {
        "pass": report.passed,
        "inconclusive": report.inconclusive,
        "failures": report.failures,
        "summary": {k: _fmt(v) for k, v in sorted(report.summary.items())},
        "records": sorted(report.records, key=lambda r: json.dumps(r, default=_fmt, sort_keys=True)),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=_fmt)
        fh.write("\n")
