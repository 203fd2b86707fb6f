"""Command line front end and the aggregated verification report.

Subcommands cover the individual operations (catalog listing, shell
enumeration, theta prefixes, modular identities, design tests, the
classification pipeline, the block-design/code bridge, and the Fano
subset search); `report` runs the whole battery and emits a
schema-versioned JSON document in which every check carries its expected
value, the observed value, and a provenance tag.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 a resource cap aborted the computation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import catalog
from . import classify as classify_mod
from . import design as design_mod
from . import designs_codes as dc
from . import qseries
from .design import configuration, design_report
from .lattice import Lattice, LatticeError, load_lattice, save_lattice
from .shells import (
    DEFAULT_MEMORY_CAP,
    ShellTooLarge,
    enumerate_shell,
    minimum,
    shell_count,
    theta_prefix,
)

SCHEMA = "latshell-verification-report/1"

# provenance tags carried by every report check
PROV_TABLE = "paper-table"
PROV_DERIVED = "derived"

# quick scope: every check whose shells stay at or below this many vectors
QUICK_SHELL_LIMIT = 10**5
# quick scope lowers the exact-certification budget so the biggest strength
# tests fall back to the seeded screen instead of a minutes-long tensor
QUICK_COST_CAP = 5 * 10**10


class UsageError(Exception):
    """Bad arguments that argparse cannot see (unknown names, bad files)."""


# -- frozen expected values --------------------------------------------
#
# Coefficient lists are the published tables; quick truncations keep all
# involved shells at or below QUICK_SHELL_LIMIT vectors.

_THETA = {
    # name: (coefficients of q^0.., full upto, quick upto)
    "O1": ([1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 2], 12, 12),
    "Z7": ([1, 14, 84, 280, 574, 840, 1288, 2368, 3444, 3542, 4424, 7560, 9240], 12, 12),
    "O7": ([1, 0, 0, 56, 126, 0, 0, 576, 756, 0, 0, 1512, 2072], 12, 12),
    "O16": ([1, 0, 0, 512, 4320, 18432, 61440, 193536, 522720], 8, 6),
    "O22": ([1, 0, 0, 2816, 49896, 456192], 5, 4),
    "O23": ([1, 0, 0, 4600, 93150, 953856], 5, 4),
    "L1621": ([1, 0, 32, 1024, 8160, 36864, 127360, 387072, 1016288], 8, 5),
    "L1622": ([1, 0, 96, 2048, 15840, 73728, 259200, 774144, 2003424], 8, 5),
    "L1623": ([1, 0, 224, 4096, 31200, 147456, 522880, 1548288, 3977696], 8, 4),
}

# lattices with a recorded modular expression; truncation follows _THETA
_IDENTITY_NAMES = ("Z7", "L1623", "O23")

_MISQUOTE_NOTE = "printed strength reads 53; the verified value is reported"

_CONFIG = {
    # name: rows (m, n, s, t, note); note marks the one misquoted entry
    "O7": [
        (3, 56, 3, 5, None),
        (4, 126, 4, 5, None),
        (7, 576, 7, 5, None),
        (8, 756, 8, 5, _MISQUOTE_NOTE),
        (11, 1512, 11, 5, None),
        (12, 2072, 12, 5, None),
    ],
    "O16": [
        (3, 512, 4, 5, None),
        (4, 4320, 6, 7, None),
        (5, 18432, 8, 5, None),
        (6, 61440, 10, 7, None),
        (7, 193536, 12, 5, None),
    ],
    "O22": [
        (3, 2816, 4, 5, None),
        (4, 49896, 6, 5, None),
        (5, 456192, 8, 5, None),
    ],
    "O23": [
        (3, 4600, 4, 7, None),
        (4, 93150, 6, 7, None),
        (5, 953856, 8, 7, None),
    ],
    "L1621": [
        (2, 32, 2, 3, None),
        (3, 1024, 6, 5, None),
        (4, 8160, 8, 3, None),
        (5, 36864, 10, 5, None),
        (6, 127360, 12, 3, None),
        (7, 387072, 14, 5, None),
    ],
    "L1622": [
        (2, 96, 4, 3, None),
        (3, 2048, 6, 5, None),
        (4, 15840, 8, 3, None),
        (5, 73728, 10, 5, None),
        (6, 259200, 12, 3, None),
        (7, 774144, 14, 5, None),
    ],
    "L1623": [
        (2, 224, 4, 3, None),
        (3, 4096, 6, 5, None),
        (4, 31200, 8, 3, None),
        (5, 147456, 10, 5, None),
        (6, 522880, 12, 3, None),
    ],
}

THEOREM_LATTICES = ("O1", "Z7", "O7", "O16", "O22", "O23", "L1621", "L1622", "L1623")

_ROOT_LABELS = {"L1621": "(A1)^16", "L1622": "(D4)^4", "L1623": "(D8)^2"}

_ADMISSIBLE = [
    ("(A1)^16", 1024, 6),
    ("(A2)^8", 1280, 9),
    ("(A4)^4", 1792, 15),
    ("(D4)^4", 2048, 18),
    ("(A8)^2", 2816, 27),
    ("(D8)^2", 4096, 42),
    ("A16", 4864, 51),
    ("(E8)^2", 8192, 90),
    ("D16", 8192, 90),
]

_SURVIVORS = ["(A1)^16", "(D4)^4", "(D8)^2"]

# norms where the small-dimensional cubic shells reach strength five:
# dimension 4 at every even norm, dimension 7 at norms 4^a (8b + 3)
_CUBIC7_FIVE = (3, 11, 12, 19)
_CUBIC7_EXACTLY_THREE = (1, 2, 4, 5)
_CUBIC4_FIVE = (2, 4, 6)


# -- plumbing -----------------------------------------------------------


def _plain(obj):
    """JSON-ready copy: Fractions to int or 'p/q', numpy to builtins."""
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _vector_cap(memory_cap_bytes, dim: int) -> int:
    """Translate a byte budget into the enumerator's vector cap (shells
    store 4-byte components)."""
    if memory_cap_bytes is None:
        return DEFAULT_MEMORY_CAP
    return max(2, int(memory_cap_bytes) // (4 * dim))


@dataclass
class VerificationReport:
    scope: str
    sections: dict
    counts: dict
    overall_pass: bool
    run: dict

    def body(self) -> dict:
        """Everything except timing; identical across worker counts."""
        return {
            "schema": SCHEMA,
            "scope": self.scope,
            "sections": self.sections,
            "counts": self.counts,
            "overall_pass": self.overall_pass,
        }

    def to_dict(self) -> dict:
        out = self.body()
        out["run"] = self.run
        return out

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def checks(self):
        for name, section in self.sections.items():
            for check in section["checks"]:
                yield name, check

    def csv_rows(self):
        rows = [["section", "id", "kind", "provenance", "status", "pass", "expected", "observed"]]
        for name, check in self.checks():
            rows.append(
                [
                    name,
                    check.get("id", ""),
                    check.get("kind", ""),
                    check.get("provenance", ""),
                    check.get("status", "ok"),
                    check.get("pass", False),
                    json.dumps(check.get("expected")),
                    json.dumps(check.get("observed")),
                ]
            )
        return rows

    @property
    def exit_code(self) -> int:
        if self.counts.get("aborted"):
            return 3
        return 0 if self.overall_pass else 1


class _ReportBuilder:
    def __init__(self, scope: str, workers=None, memory_cap=None, only=None):
        if scope not in ("quick", "full"):
            raise UsageError(f"unknown scope {scope!r}")
        self.scope = scope
        self.quick = scope == "quick"
        self.workers = workers
        self.memory_cap = memory_cap
        self.only = only
        self.cost_cap = QUICK_COST_CAP if self.quick else None
        self.sections: dict[str, dict] = {}
        self.section_seconds: dict[str, float] = {}
        self.aborted = 0
        self._shells: dict = {}

    # - helpers -

    def _cap(self, lat: Lattice) -> int:
        return _vector_cap(self.memory_cap, lat.dim)

    def shell(self, name: str, m):
        key = (name, m)
        if key not in self._shells:
            lat = catalog.build(name)
            self._shells[key] = enumerate_shell(
                lat, m, workers=self.workers, memory_cap=self._cap(lat)
            )
        return self._shells[key]

    def record(self, section, kind, cid, expected, observed, provenance, passed=None, **extra):
        expected = _plain(expected)
        observed = _plain(observed)
        if passed is None:
            passed = expected == observed
        rec = {
            "id": cid,
            "kind": kind,
            "provenance": provenance,
            "expected": expected,
            "observed": observed,
            "status": "ok",
            "pass": bool(passed),
        }
        for k, v in extra.items():
            rec[k] = _plain(v)
        self.sections.setdefault(section, {"checks": []})["checks"].append(rec)
        return rec["pass"]

    def _fault(self, section, status, detail):
        self.sections.setdefault(section, {"checks": []})["checks"].append(
            {
                "id": f"{section}/fault",
                "kind": "fault",
                "provenance": PROV_DERIVED,
                "expected": "section completes",
                "observed": detail,
                "status": status,
                "pass": False,
            }
        )

    def run_section(self, name, fn):
        if self.only is not None and name not in self.only:
            return
        start = time.perf_counter()
        try:
            fn()
        except ShellTooLarge as exc:
            self._fault(name, "resource-abort", str(exc))
            self.aborted += 1
        except MemoryError:
            self._fault(name, "resource-abort", "out of memory")
            self.aborted += 1
        except Exception as exc:  # noqa: BLE001 - a broken section must not sink the report
            self._fault(name, "error", f"{type(exc).__name__}: {exc}")
        finally:
            self.section_seconds[name] = round(time.perf_counter() - start, 3)
            self._shells.clear()

    # - per-lattice checks -

    def lattice_section(self, name):
        lat = catalog.build(name)
        coeffs, full_upto, quick_upto = _THETA[name]
        upto = quick_upto if self.quick else full_upto
        observed = theta_prefix(lat, upto, workers=self.workers, memory_cap=self._cap(lat))
        self.record(
            name,
            "theta-prefix",
            f"theta/{name}/q{upto}",
            coeffs[: upto + 1],
            observed,
            PROV_TABLE,
        )
        if name in _IDENTITY_NAMES:
            claimed = qseries.theta_identity_rhs(name, upto)
            self.record(
                name,
                "theta-identity",
                f"identity/{name}/q{upto}",
                claimed,
                observed,
                PROV_TABLE,
                note="counted coefficients against the modular expression",
            )
        for m, n_exp, s_exp, t_exp, note in _CONFIG.get(name, ()):
            if self.quick and n_exp > QUICK_SHELL_LIMIT:
                continue
            cfg = configuration(self.shell(name, m), t_max=9, cost_cap=self.cost_cap)
            extra = {"exact": cfg.exact, "capped": cfg.capped}
            prov = PROV_TABLE
            if note:
                extra["note"] = note
                extra["printed_strength"] = 53
                prov = PROV_DERIVED
            self.record(
                name,
                "configuration",
                f"config/{name}/m{m}",
                [lat.dim, n_exp, s_exp, t_exp],
                [cfg.d, cfg.n, cfg.s, cfg.t],
                prov,
                **extra,
            )
        self._design_checks(name)
        self._classification_checks(name, lat)

    def _design_checks(self, name):
        s3 = self.shell(name, 3)
        v5 = design_report(s3, 5, cost_cap=self.cost_cap)
        self.record(
            name,
            "design-test",
            f"design/{name}/s3-t5",
            {"is_design": True, "exact": True},
            {"is_design": v5.is_design, "exact": v5.exact},
            PROV_TABLE,
        )
        if name == "O23":
            v7 = design_report(s3, 7, cost_cap=self.cost_cap)
            self.record(
                name,
                "design-test",
                "design/O23/s3-t7",
                {"is_design": True},
                {"is_design": v7.is_design},
                PROV_TABLE,
                exact=v7.exact,
            )
            v9 = design_report(s3, 9, cost_cap=self.cost_cap)
            self.record(
                name,
                "design-test",
                "design/O23/s3-t9",
                {"is_design": False},
                {"is_design": v9.is_design},
                PROV_TABLE,
            )
        if name == "O7":
            v7 = design_report(s3, 7)
            self.record(
                name,
                "design-test",
                "design/O7/s3-t7",
                {"is_design": False},
                {"is_design": v7.is_design},
                PROV_TABLE,
            )

    def _classification_checks(self, name, lat):
        s3 = self.shell(name, 3)
        self.record(
            name,
            "neighbor-forms",
            f"classify/{name}/neighbor-forms",
            True,
            classify_mod.check_ni_formulas(s3),
            PROV_TABLE,
        )
        if name == "L1621":
            prof = classify_mod.neighbor_profile(s3, s3.vectors[0])
            self.record(
                name,
                "neighbor-profile",
                "classify/L1621/profile",
                [500, 255, 6],
                [prof.n0, prof.n1, prof.n2],
                PROV_TABLE,
            )
        if name in ("Z7", "L1621", "L1622", "L1623"):
            self.record(
                name,
                "minvec-forms",
                f"classify/{name}/minvec-forms",
                True,
                classify_mod.check_pi_formulas(lat),
                PROV_TABLE,
            )
        if name not in _ROOT_LABELS:
            return
        div = classify_mod.divisibility_and_s2(lat)
        self.record(
            name,
            "s2-size",
            f"classify/{name}/s2-size",
            {
                "s2_size": div["shell_size"] // 16 - 32,
                "formula_matches": True,
                "divisible_by_256": True,
                "at_least_512": True,
            },
            {
                "s2_size": div["s2_size"],
                "formula_matches": div["s2_matches"],
                "divisible_by_256": div["divisible_by_256"],
                "at_least_512": div["at_least_512"],
            },
            PROV_TABLE,
        )
        self.record(
            name,
            "pair-counting-forms",
            f"classify/{name}/P2-forms",
            True,
            classify_mod.check_P2_closed_forms(s3),
            PROV_TABLE,
        )
        s2c = classify_mod.s2_neighbor_counts(lat)
        keys = (
            "ip1_matches",
            "ip0_consistent_matches",
            "cross_count_equals_n2",
            "double_count_holds",
        )
        self.record(
            name,
            "s2-neighbor-counts",
            f"classify/{name}/s2-counts",
            {k: True for k in keys},
            {k: s2c[k] for k in keys},
            PROV_TABLE,
            ip1=s2c["ip1"],
            ip0=s2c["ip0"],
            printed_form_matches=s2c["ip0_printed_matches"],
            note="the printed zero-product form disagrees with the verified counts; both are recorded",
        )
        decomp = classify_mod.root_decompose(self.shell(name, 2))
        self.record(
            name,
            "root-system",
            f"classify/{name}/root-system",
            _ROOT_LABELS[name],
            decomp.label(),
            PROV_TABLE,
        )

    # - global sections -

    def replay_section(self):
        sec = "classification-replay"
        rep = classify_mod.replay_report()
        observed_cases = [(c["root_system"], c["shell_size"], c["n2"]) for c in rep["cases"]]
        self.record(sec, "admissible-cases", "replay/admissible", _ADMISSIBLE, observed_cases, PROV_TABLE)
        self.record(sec, "survivors", "replay/survivors", _SURVIVORS, rep["survivors"], PROV_TABLE)
        cases = {c["root_system"]: c for c in rep["cases"]}
        for label in ("(A2)^8", "(A4)^4", "(A8)^2", "A16"):
            c = cases[label]
            self.record(
                sec,
                "elimination",
                f"replay/parity/{label}",
                {"survives": False, "odd_target": True},
                {"survives": c["survives"], "odd_target": c["n2"] % 2 == 1},
                PROV_TABLE,
                reason=c["reason"],
            )
        for label in ("D16", "(E8)^2"):
            c = cases[label]
            self.record(
                sec,
                "elimination",
                f"replay/no-sum/{label}",
                {"survives": False, "reason": "n2 is not a sum of component counts"},
                {"survives": c["survives"], "reason": c["reason"]},
                PROV_TABLE,
                component_counts=c["component_counts"],
            )
        sums = (
            ("(A1)^16", "n2 = 1 + 1 + 1 + 1 + 1 + 1"),
            ("(D4)^4", "n2 = 6 + 6 + 6"),
            ("(D8)^2", "n2 = 14 + 28"),
        )
        for label, summed in sums:
            c = cases[label]
            self.record(
                sec,
                "elimination",
                f"replay/sum/{label}",
                {"survives": True, "reason": summed},
                {"survives": c["survives"], "reason": c["reason"]},
                PROV_TABLE,
            )
        # the minimal-norm form (n+2)/9 is integral at ranks 7 and 16 only
        forced = sorted(n for n in range(1, 24) if (n + 2) % 9 == 0)
        self.record(sec, "rank-forcing", "replay/rank-forcing", [7, 16], forced, PROV_DERIVED)

    def designs_codes_section(self):
        sec = "designs-codes"
        expected_codes = {"L1621": (16, [16, 6, 6]), "L1622": (32, [16, 7, 4]), "L1623": (64, [16, 8, 4])}
        expected_lambda = {"L1621": 2, "L1622": 4, "L1623": 8}
        for name, (classes, code) in expected_codes.items():
            rep = dc.design_code_report(catalog.build(name))
            self.record(
                sec,
                "design-code",
                f"design-code/{name}/code",
                {"classes": classes, "code": code, "root_system": _ROOT_LABELS[name]},
                {"classes": rep["classes"], "code": rep["code"], "root_system": rep["root_system"]},
                PROV_TABLE,
                frame_reconstructed=rep["frame_reconstructed"],
            )
            self.record(
                sec,
                "block-design",
                f"design-code/{name}/blocks",
                {"lambda": expected_lambda[name]},
                {"lambda": rep["design"]["lambda"]},
                PROV_TABLE if name == "L1621" else PROV_DERIVED,
            )
        mat = dc.IncidenceMatrix.from_strings(dc.BLOCK_DESIGN_16_6_2)
        self.record(
            sec,
            "design-verify",
            "design-code/printed-blocks",
            {"is_2_16_6_2": True, "lambda": 2},
            {"is_2_16_6_2": dc.verify_design(mat, 2, 16, 6, 2), "lambda": dc.design_lambda(mat, 2)},
            PROV_TABLE,
        )
        rebuilt = dc.lattice_from_design(mat)
        got = theta_prefix(rebuilt, 6, workers=self.workers)
        self.record(
            sec,
            "rebuild-theta",
            "design-code/rebuild/q6",
            _THETA["L1621"][0][:7],
            got,
            PROV_TABLE,
        )

    def fano_section(self):
        sec = "fano-subsets"
        rep = dc.fano_report()
        self.record(
            sec,
            "fano-family",
            "fano/family",
            {"count": 30, "disjoint_pair_exists": True, "max_family": 2},
            {
                "count": rep["count"],
                "disjoint_pair_exists": rep["disjoint_pairs"] > 0,
                "max_family": rep["max_family"],
            },
            PROV_TABLE,
            disjoint_pairs=rep["disjoint_pairs"],
        )

    def cubic_section(self):
        sec = "cubic-shells"
        z7 = catalog.build("Z7")
        for m in _CUBIC7_FIVE:
            sh = enumerate_shell(z7, m, workers=self.workers, memory_cap=self._cap(z7))
            v = design_report(sh, 5)
            self.record(
                sec,
                "design-test",
                f"cubic/Z7/m{m}-t5",
                {"is_design": True, "exact": True},
                {"is_design": v.is_design, "exact": v.exact},
                PROV_DERIVED,
                note="norm of the form 4^a (8b + 3)",
            )
        for m in _CUBIC7_EXACTLY_THREE:
            sh = enumerate_shell(z7, m, workers=self.workers, memory_cap=self._cap(z7))
            v3 = design_report(sh, 3)
            v5 = design_report(sh, 5)
            self.record(
                sec,
                "design-test",
                f"cubic/Z7/m{m}-exactly-t3",
                {"t3": True, "t5": False},
                {"t3": v3.is_design, "t5": v5.is_design},
                PROV_DERIVED,
            )
        z4 = catalog.build("Z4")
        for m in _CUBIC4_FIVE:
            sh = enumerate_shell(z4, m, workers=self.workers, memory_cap=self._cap(z4))
            v = design_report(sh, 5)
            self.record(
                sec,
                "design-test",
                f"cubic/Z4/m{m}-t5",
                {"is_design": True, "exact": True},
                {"is_design": v.is_design, "exact": v.exact},
                PROV_DERIVED,
                note="every even norm",
            )

    # - assembly -

    def build(self) -> VerificationReport:
        total_start = time.perf_counter()
        for name in THEOREM_LATTICES:
            self.run_section(name, lambda n=name: self.lattice_section(n))
        self.run_section("classification-replay", self.replay_section)
        self.run_section("designs-codes", self.designs_codes_section)
        self.run_section("fano-subsets", self.fano_section)
        self.run_section("cubic-shells", self.cubic_section)
        checks = passed = 0
        for section in self.sections.values():
            ok = True
            for check in section["checks"]:
                checks += 1
                if check["pass"]:
                    passed += 1
                else:
                    ok = False
            section["pass"] = ok
        counts = {
            "checks": checks,
            "passed": passed,
            "failed": checks - passed,
            "aborted": self.aborted,
        }
        run = {
            "workers": self.workers,
            "seconds": round(time.perf_counter() - total_start, 3),
            "section_seconds": self.section_seconds,
        }
        return VerificationReport(
            scope=self.scope,
            sections=self.sections,
            counts=counts,
            overall_pass=checks == passed and self.aborted == 0,
            run=run,
        )


def run_report(scope: str = "quick", workers=None, out=None, memory_cap=None, only=None) -> VerificationReport:
    """Run the verification battery.

    quick keeps every check at or below 10^5 shell vectors and lowers the
    exact-certification budget; full runs everything, including the
    million-vector shells. `only` restricts to the named sections (used
    for fault isolation tests). The report body is independent of the
    worker count; timing lives under the separate "run" key.
    """
    report = _ReportBuilder(scope, workers=workers, memory_cap=memory_cap, only=only).build()
    if out:
        with open(out, "w") as fh:
            fh.write(report.to_json() + "\n")
    return report


# -- argument handling --------------------------------------------------


def _resolve_lattice(target: str) -> Lattice:
    """A file path when one exists (or is clearly meant), else a catalog
    name."""
    looks_like_path = os.sep in target or target.endswith(".lat")
    if os.path.exists(target) or looks_like_path:
        try:
            return load_lattice(target)
        except OSError as exc:
            raise UsageError(f"cannot read {target}: {exc}") from None
        except LatticeError as exc:
            raise UsageError(f"bad lattice file {target}: {exc}") from None
    try:
        return catalog.build(target)
    except LatticeError:
        raise UsageError(
            f"{target!r} is neither a lattice file nor a catalog name; see `latshell catalog`"
        ) from None


def _parse_norm(text: str) -> Fraction:
    try:
        m = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad norm {text!r}: expected an integer or fraction") from None
    if m < 0:
        raise UsageError("norm must be nonnegative")
    return m


def _opt(args, name, default=None):
    return getattr(args, name, default)


def _emit(args, payload, table_rows=None):
    if _opt(args, "format", "json") == "csv":
        writer = csv.writer(sys.stdout)
        for row in table_rows if table_rows is not None else _kv_rows(payload):
            writer.writerow(row)
    else:
        print(json.dumps(_plain(payload), indent=2))


def _kv_rows(payload, prefix=""):
    """Flatten nested structures to key,value pairs for csv output."""
    payload = _plain(payload)
    if isinstance(payload, dict):
        rows = []
        for k, v in payload.items():
            rows.extend(_kv_rows(v, f"{prefix}.{k}" if prefix else str(k)))
        return rows
    if isinstance(payload, list) and any(isinstance(v, (dict, list)) for v in payload):
        rows = []
        for i, v in enumerate(payload):
            rows.extend(_kv_rows(v, f"{prefix}[{i}]"))
        return rows
    if isinstance(payload, list):
        return [[prefix, " ".join(str(v) for v in payload)]]
    return [[prefix, payload]]


# -- subcommands --------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.name is None:
        entries = []
        for name in catalog.CATALOG_NAMES:
            lat = catalog.build(name)
            entries.append(
                {
                    "name": name,
                    "dim": lat.dim,
                    "det": lat.determinant(),
                    "min": minimum(lat),
                }
            )
        rows = [["name", "dim", "det", "min"]]
        rows += [[e["name"], e["dim"], _plain(e["det"]), _plain(e["min"])] for e in entries]
        _emit(args, entries, rows)
        return 0
    lat = _resolve_lattice(args.name)
    mn = minimum(lat)
    info = {
        "name": args.name,
        "dim": lat.dim,
        "det": lat.determinant(),
        "min": mn,
        "min_shell": shell_count(lat, mn, workers=_opt(args, "workers")),
        "integral": all(x.denominator == 1 for row in lat.gram for x in row),
    }
    if args.out:
        save_lattice(lat, args.out)
        info["written"] = args.out
    _emit(args, info)
    return 0


def cmd_shell(args) -> int:
    lat = _resolve_lattice(args.lattice)
    m = _parse_norm(args.m)
    cap = _vector_cap(_opt(args, "memory_cap"), lat.dim)
    workers = _opt(args, "workers")
    if args.print_vectors:
        sh = enumerate_shell(lat, m, workers=workers, memory_cap=cap)
        count = len(sh)
        head = sh.vectors[: args.print_vectors]
        payload = {"lattice": args.lattice, "m": m, "count": count, "vectors": head}
        rows = [["lattice", "m", "count"], [args.lattice, _plain(m), count]]
        rows += [list(v) for v in _plain(head)]
    else:
        count = shell_count(lat, m, workers=workers, memory_cap=cap)
        payload = {"lattice": args.lattice, "m": m, "count": count}
        rows = [["lattice", "m", "count"], [args.lattice, _plain(m), count]]
    _emit(args, payload, rows)
    return 0


def cmd_theta(args) -> int:
    lat = _resolve_lattice(args.lattice)
    cap = _vector_cap(_opt(args, "memory_cap"), lat.dim)
    coeffs = theta_prefix(lat, args.upto, workers=_opt(args, "workers"), memory_cap=cap)
    payload = {"lattice": args.lattice, "upto": args.upto, "coefficients": coeffs}
    rows = [["m", "count"]] + [[m, c] for m, c in enumerate(coeffs)]
    _emit(args, payload, rows)
    return 0


def cmd_identity(args) -> int:
    names = list(_IDENTITY_NAMES) if args.name == "all" else [args.name]
    for name in names:
        if name not in qseries.IDENTITY_FORMS:
            raise UsageError(
                f"no identity on record for {name!r}; choose from {', '.join(_IDENTITY_NAMES)} or all"
            )
    default_upto = {name: _THETA[name][1] for name in _IDENTITY_NAMES}
    results = []
    ok = True
    for name in names:
        upto = args.upto if args.upto is not None else default_upto[name]
        res = qseries.verify_theta_identity(name, upto, workers=_opt(args, "workers"))
        results.append(res)
        ok = ok and res["match"]
    payload = results[0] if len(results) == 1 else results
    rows = [["name", "upto", "match"]] + [[r["name"], r["upto"], r["match"]] for r in results]
    _emit(args, payload, rows)
    return 0 if ok else 1


def cmd_design_test(args) -> int:
    lat = _resolve_lattice(args.lattice)
    m = _parse_norm(args.m)
    cap = _vector_cap(_opt(args, "memory_cap"), lat.dim)
    sh = enumerate_shell(lat, m, workers=_opt(args, "workers"), memory_cap=cap)
    verdict = design_report(sh, args.t, force_exact=args.force_exact)
    payload = {
        "lattice": args.lattice,
        "m": m,
        "count": len(sh),
        "t": args.t,
        "is_design": verdict.is_design,
        "exact": verdict.exact,
        "degree": verdict.degree,
    }
    _emit(args, payload)
    return 0 if verdict.is_design else 1


def _classification_ok(rep: dict) -> bool:
    if not rep["ni_formulas"]:
        return False
    # the minimal-vector forms only apply when the minimum is (n+2)/9
    if Fraction(rep["minimum"]) == Fraction(rep["dim"] + 2, 9) and not rep["pi_formulas"]:
        return False
    if "divisibility" in rep:
        div = rep["divisibility"]
        if not (div["s2_matches"] and div["divisible_by_256"] and div["at_least_512"]):
            return False
        if not rep["P2_closed_forms"]:
            return False
        s2c = rep["s2_counts"]
        if not (
            s2c["ip1_matches"]
            and s2c["ip0_consistent_matches"]
            and s2c["cross_count_equals_n2"]
            and s2c["double_count_holds"]
        ):
            return False
        if not (rep["admissible_case"] and rep["surviving_case"]):
            return False
    return True


def cmd_classify(args) -> int:
    if args.replay or args.lattice is None:
        if args.lattice is not None:
            raise UsageError("--replay takes no lattice argument")
        if not args.replay:
            raise UsageError("give a lattice to classify, or --replay for the case analysis")
        rep = classify_mod.replay_report()
        _emit(args, rep)
        return 0 if rep["survivors"] == _SURVIVORS else 1
    lat = _resolve_lattice(args.lattice)
    rep = classify_mod.classification_report(lat)
    _emit(args, rep)
    return 0 if _classification_ok(rep) else 1


def cmd_design_code(args) -> int:
    lat = _resolve_lattice(args.lattice)
    rep = dc.design_code_report(lat)
    _emit(args, rep)
    return 0 if isinstance(rep["design"]["lambda"], int) else 1


def cmd_fano(args) -> int:
    rep = dc.fano_report()
    ok = rep["count"] == 30 and rep["disjoint_pairs"] > 0 and rep["max_family"] == 2
    _emit(args, rep)
    return 0 if ok else 1


def cmd_report(args) -> int:
    rep = run_report(
        scope=args.scope,
        workers=_opt(args, "workers"),
        out=args.out,
        memory_cap=_opt(args, "memory_cap"),
    )
    if _opt(args, "format", "json") == "csv":
        writer = csv.writer(sys.stdout)
        for row in rep.csv_rows():
            writer.writerow(row)
    elif args.out:
        for name, section in rep.sections.items():
            state = "pass" if section["pass"] else "FAIL"
            print(f"{name}: {state} ({len(section['checks'])} checks)")
        c = rep.counts
        print(f"total {c['checks']} checks, {c['passed']} passed, {c['failed']} failed")
        print(f"report written to {args.out}")
    else:
        print(rep.to_json())
    return rep.exit_code


# -- parser -------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument(
        "--workers",
        type=int,
        default=argparse.SUPPRESS,
        metavar="N",
        help="enumeration worker threads (default: LATSHELL_WORKERS or 1)",
    )
    g.add_argument(
        "--memory-cap",
        type=int,
        default=argparse.SUPPRESS,
        metavar="BYTES",
        help="abort any shell whose stored vectors would exceed this budget",
    )
    g.add_argument(
        "--format",
        choices=("json", "csv"),
        default=argparse.SUPPRESS,
        help="output format; csv covers the tabular parts only",
    )
    g.add_argument(
        "--seed",
        type=int,
        default=argparse.SUPPRESS,
        metavar="S",
        help="seed for the witness screen used by oversized design tests",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="latshell",
        parents=[common],
        description="Exact lattice shell enumeration, spherical design tests, and the verification report.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("catalog", parents=[common], help="list the built-in lattices or inspect one")
    p.add_argument("name", nargs="?", help="catalog name or lattice file")
    p.add_argument("--out", metavar="PATH", help="write the lattice in the text format")

    p = sub.add_parser("shell", parents=[common], help="count (or print) the vectors of one shell")
    p.add_argument("lattice", help="catalog name or lattice file")
    p.add_argument("m", help="norm, as integer or fraction")
    p.add_argument(
        "--print", dest="print_vectors", type=int, default=0, metavar="N",
        help="also print the first N coordinate rows",
    )

    p = sub.add_parser("theta", parents=[common], help="shell counts at integer norms 0..UPTO")
    p.add_argument("lattice", help="catalog name or lattice file")
    p.add_argument("--upto", type=int, default=8, metavar="UPTO")

    p = sub.add_parser("identity", parents=[common], help="check a recorded modular identity")
    p.add_argument("name", nargs="?", default="all", help="Z7, L1623, O23, or all")
    p.add_argument("--upto", type=int, default=None, help="override the truncation")

    p = sub.add_parser("design-test", parents=[common], help="spherical design test for one shell")
    p.add_argument("lattice", help="catalog name or lattice file")
    p.add_argument("m", help="norm of the shell")
    p.add_argument("t", type=int, help="design strength to test")
    p.add_argument("--force-exact", action="store_true", help="never fall back to the witness screen")

    p = sub.add_parser("classify", parents=[common], help="run the classification checks on a lattice")
    p.add_argument("lattice", nargs="?", help="catalog name or lattice file")
    p.add_argument("--replay", action="store_true", help="replay the rank-16 case analysis instead")

    p = sub.add_parser("design-code", parents=[common], help="sign classes, block design, and code of a norm-3 shell")
    p.add_argument("lattice", help="catalog name or lattice file")

    sub.add_parser("fano", parents=[common], help="seven-dimensional subset search in the cubic norm-3 shell")

    p = sub.add_parser("report", parents=[common], help="run the verification battery")
    p.add_argument("--scope", choices=("quick", "full"), default="quick")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here")

    return parser


_DISPATCH = {
    "catalog": cmd_catalog,
    "shell": cmd_shell,
    "theta": cmd_theta,
    "identity": cmd_identity,
    "design-test": cmd_design_test,
    "classify": cmd_classify,
    "design-code": cmd_design_code,
    "fano": cmd_fano,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    seed = _opt(args, "seed")
    if seed is not None:
        design_mod._WITNESS_SEED = seed
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ShellTooLarge as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except MemoryError:
        print("resource limit: out of memory", file=sys.stderr)
        return 3
    except LatticeError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
