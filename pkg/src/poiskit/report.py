"""End-to-end analysis pipeline and report assembly.

The report is deterministic for a fixed seed and option set: ideals are
printed as generator lists sorted under degrevlex, every inconclusive
verdict carries its unresolved ideal verbatim, and wall-clock timing is kept
out of the payload (the CLI prints it to stderr).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from ._kernel import to_qq
from .polyalg import MultivectorField, Polynomial, degrevlex_key
from .modcalc import SubmodulePresentation
from .poisson import (
    DistributionPresentation,
    PoissonStructure,
    almost_regular_decide,
    casimir_search,
    check_jacobi,
    germinal_isotropy,
    linear_bivector,
    lie_jacobi_defect,
    linear_poisson,
    verify_distribution,
    DENSITY_RATIONALE,
    SMOOTHNESS_NOTE,
    top_power,
)
from .construct import logf_classify

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed analysis input."""


def sort_polys(polys: Sequence[Polynomial]) -> list[Polynomial]:
    """Degrevlex-descending by leading monomial, then lexicographic text."""

    def key(p: Polynomial):
        if p.is_zero:
            return ((-1, ()), "")
        e, _ = p.leading()
        return (degrevlex_key(e), str(p))

    return sorted(polys, key=key, reverse=True)


def _poly_list(polys: Sequence[Polynomial]) -> list[str]:
    return [str(p) for p in sort_polys(list(polys))]


def _gen_list(gens) -> list[list[str]]:
    return [[str(p) for p in g] for g in gens]


@dataclass
class AnalysisOptions:
    max_degree: int = 4
    samples: int = 10000
    seed: int = 0
    skip_jacobi: bool = False


@dataclass
class AnalysisReport:
    data: dict
    inconclusive: bool

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        d = self.data
        lines = [f"poiskit analysis (schema {d['schema']})", ""]
        lines.append(f"chart: {', '.join(d['input']['coordinates'])}")
        lines.append(f"bivector: {d['input']['bivector_pretty']}")
        if "lie_algebra" in d:
            la = d["lie_algebra"]
            lines.append(f"lie algebra mode: center dim {la['center_dimension']}, "
                         f"origin kernel matches center: {la['h0_matches_center']['outcome']}")
        lines.append("")
        lines.append(f"jacobi: {d['jacobi']['outcome']}"
                     + (" (skipped: exploratory run)" if d['jacobi'].get('skipped') else ""))
        if d.get("zero_bivector"):
            lines.append("zero bivector: k undefined; trivially almost regular "
                         "(rank-0 distribution, full kernel module)")
            return "\n".join(lines) + "\n"
        lines.append(f"k = {d['k']}  (maximal rank {2 * d['k']})")
        lines.append(f"regular-locus ideal: {d['regular_locus_ideal']}")
        lines.append(f"density of the maximal-rank locus: yes ({d['density_rationale']})")
        iso = d["germinal_isotropy"]
        lines.append("")
        lines.append(f"kernel module generators: {iso['generators']}")
        lines.append(f"generic kernel dimension: {iso['generic_dimension']}")
        ar = d["almost_regular"]
        lines.append("")
        lines.append(f"almost regular: {ar['outcome']}")
        if ar["outcome"] == "yes":
            lines.append(f"  distribution rank {ar['distribution']['rank']}, generators "
                         f"{ar['distribution']['generators']}")
            checks = d.get("distribution_checks", {})
            if checks:
                lines.append("  checks: " + ", ".join(
                    f"{k}={v['outcome']}" for k, v in sorted(checks["items"].items())))
        elif ar["outcome"] == "no":
            lines.append(f"  witness point: {ar['witness']}")
            lines.append(f"  kernel dimension {ar['dims']['at_witness']} at witness, "
                         f"{ar['dims']['generic']} generically")
        else:
            lines.append(f"  reason: {ar.get('reason')}")
            lines.append(f"  unresolved ideal: {ar.get('unresolved_ideal')}")
        if "log_f" in d:
            lf = d["log_f"]
            lines.append("")
            lines.append(f"log-type classification: {lf['verdict']}")
            if lf.get("g") is not None:
                lines.append(f"  g = {lf['g']}")
                lines.append(f"  Z ideal: {lf['z_ideal']}")
                lines.append(f"  Z_sing ideal: {lf['z_sing_ideal']}")
                lines.append(f"  transversality: {lf['transversality']['outcome']}")
        cas = d.get("casimirs")
        if cas is not None:
            lines.append("")
            lines.append(f"polynomial casimirs up to degree {cas['max_degree']}: {cas['basis']}")
        lines.append("")
        lines.append("assumptions:")
        for note in d["assumptions"]:
            lines.append(f"  - {note}")
        return "\n".join(lines) + "\n"


def parse_input(document: dict) -> tuple[PoissonStructure, dict]:
    """Build the structure from the JSON document; returns (structure, echo)."""
    if "coordinates" not in document:
        raise InputError("missing 'coordinates'")
    coords = tuple(document["coordinates"])
    if len(set(coords)) != len(coords):
        raise InputError("duplicate coordinate names")
    mode = document.get("mode", "bivector")
    echo: dict = {"coordinates": list(coords), "mode": mode}
    if mode == "lie_algebra":
        constants = document.get("structure_constants")
        if constants is None:
            raise InputError("lie_algebra mode needs 'structure_constants'")
        n = len(coords)
        table = _parse_constants(constants, n)
        defects = lie_jacobi_defect(table)
        if defects:
            raise InputError(f"structure constants fail the Lie-Jacobi identity: {defects[:3]}")
        bivector = linear_bivector(table, coords)
        echo["structure_constants"] = [[[str(to_qq(v)) for v in row] for row in plane]
                                       for plane in table]
    elif mode == "bivector":
        entries = document.get("bivector")
        if entries is None:
            raise InputError("missing 'bivector'")
        comps: dict[tuple[int, int], Polynomial] = {}
        echo_entries = []
        for entry in entries:
            try:
                i, j, coeff = int(entry["i"]), int(entry["j"]), str(entry["coeff"])
            except (KeyError, TypeError) as exc:
                raise InputError(f"bad bivector entry {entry!r}: {exc}") from None
            if not 0 <= i < j < len(coords):
                raise InputError(f"bivector entry needs 0 <= i < j < {len(coords)}, got ({i},{j})")
            poly = Polynomial.parse(coords, coeff)
            comps[(i, j)] = (comps.get((i, j), Polynomial.zero(coords))) + poly
            echo_entries.append({"i": i, "j": j, "coeff": coeff})
        bivector = MultivectorField.bivector(coords, comps)
        echo["bivector"] = echo_entries
    else:
        raise InputError(f"unknown mode {mode!r}")
    structure = PoissonStructure.unchecked(bivector)
    echo["bivector_pretty"] = str(bivector)
    return structure, echo


def _parse_constants(constants, n: int):
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    if isinstance(constants, list) and constants and isinstance(constants[0], dict):
        for entry in constants:
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
            c = to_qq(str(entry["c"]))
            table[i][j][k] = c
            table[j][i][k] = -c
        return table
    if isinstance(constants, list):
        for i, plane in enumerate(constants):
            for j, row in enumerate(plane):
                for k, v in enumerate(row):
                    table[i][j][k] = to_qq(str(v))
        return table
    raise InputError("structure_constants must be a dense array or a sparse entry list")


def analyze(document: dict, options: AnalysisOptions | None = None) -> AnalysisReport:
    """Full pipeline: jacobi, rank data, kernel module, constant-rank
    decision, distribution checks, log-type classification, Casimir search."""
    options = options or AnalysisOptions()
    structure, echo = parse_input(document)
    data: dict = {"schema": SCHEMA_VERSION, "input": echo,
                  "options": {"max_degree": options.max_degree, "samples": options.samples,
                              "seed": options.seed, "skip_jacobi": options.skip_jacobi}}
    inconclusive = False

    if options.skip_jacobi:
        data["jacobi"] = {"outcome": "skipped", "skipped": True,
                          "note": "jacobi verification skipped (exploratory run)"}
    else:
        jac = check_jacobi(structure.bivector)
        data["jacobi"] = jac.to_json()
        if not jac.is_yes:
            raise InputError(
                f"Jacobi identity fails: trivector component {jac.witness['indices']} "
                f"has coefficient {jac.witness['coefficient']}")

    if document.get("mode") == "lie_algebra":
        table = _parse_constants(document["structure_constants"], len(echo["coordinates"]))
        lp = linear_poisson(table, echo["coordinates"])
        data["lie_algebra"] = {
            "center_dimension": len(lp.center_basis),
            "center_basis": [[str(v) for v in vec] for vec in lp.center_basis],
            "h0_matches_center": lp.h0_matches_center.to_json(),
        }

    if structure.is_zero:
        data["zero_bivector"] = True
        data["k"] = 0
        data["almost_regular"] = {"outcome": "yes",
                                  "note": "zero bivector: rank-0 distribution"}
        data["assumptions"] = [SMOOTHNESS_NOTE]
        return AnalysisReport(data, inconclusive=False)

    tp = top_power(structure)
    data["k"] = tp.k
    data["regular_locus_ideal"] = _poly_list(tp.coefficient_ideal)
    data["density_rationale"] = DENSITY_RATIONALE

    iso = germinal_isotropy(structure)
    data["germinal_isotropy"] = {
        "generators": _gen_list(iso.module.generators),
        "generic_dimension": iso.generic_dimension,
        "drop_ideal": _poly_list(iso.drop_ideal),
    }

    decision = almost_regular_decide(structure, seed=options.seed, samples=options.samples)
    ar: dict = {"outcome": decision.outcome}
    if decision.is_yes:
        dist: DistributionPresentation = decision.payload["distribution"]
        ar["distribution"] = {"rank": dist.rank, "generators": _gen_list(dist.generators),
                              "saturation_exponent": dist.provenance.get("saturation_exponent")}
    elif decision.is_no:
        ar["witness"] = [str(c) for c in decision.witness]
        ar["dims"] = decision.payload["dims"]
    else:
        inconclusive = True
        ar["reason"] = decision.reason
        ar["unresolved_ideal"] = decision.payload.get("unresolved_ideal")
    data["almost_regular"] = ar

    if decision.is_yes:
        dist = decision.payload["distribution"]
        declared = document.get("declared_distribution")
        if declared:
            gens = [[Polynomial.parse(structure.variables, str(c)) for c in row]
                    for row in declared]
            declared_module = SubmodulePresentation(structure.variables,
                                                    len(structure.variables), gens)
            checked = DistributionPresentation(declared_module, dist.rank,
                                               provenance={"declared": True})
            data["declared_distribution"] = {
                "generators": _gen_list(gens),
                "equals_computed": declared_module.equals_module(dist.module).outcome,
            }
            target = checked
        else:
            target = dist
        checks = verify_distribution(target, structure, seed=options.seed)
        data["distribution_checks"] = {
            "outcome": checks.outcome,
            "items": {k: v.to_json() for k, v in checks.payload.items()},
        }
        if checks.is_inconclusive:
            inconclusive = True

        classification = logf_classify(structure, seed=options.seed, decision=decision)
        lf = {"verdict": classification.verdict}
        if classification.g is not None:
            lf["g"] = str(classification.g)
            lf["section"] = str(classification.section)
            lf["z_ideal"] = _poly_list(classification.z_ideal)
            lf["z_sing_ideal"] = _poly_list(classification.z_sing_ideal)
            lf["transversality"] = classification.transversality.to_json()
        if classification.verdict == "inconclusive":
            inconclusive = True
            lf["notes"] = classification.notes
        data["log_f"] = lf

    basis = casimir_search(structure, options.max_degree)
    data["casimirs"] = {"max_degree": options.max_degree, "basis": [str(p) for p in basis]}

    data["assumptions"] = [
        SMOOTHNESS_NOTE,
        "density of the maximal-rank locus is certified structurally: " + DENSITY_RATIONALE,
    ]
    return AnalysisReport(data, inconclusive=inconclusive)
