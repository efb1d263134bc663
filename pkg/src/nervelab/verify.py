"""Run every theorem check on one (complex, function, cover) instance."""

from __future__ import annotations

from dataclasses import dataclass

from .complex import SimplicialComplex, betti
from .covers import Cover, GuardExceeded, lebesgue_number, s_max
from .generators import classify_survival, minimal_generator_basis
from .metrics import claim_report, d_delta_metric, df_metric
from .persistence import bottleneck_distance, cech_filtration, persistence_diagram
from .pullback import DomainFunction, check_mesh, h1_pushforward_rank, mapper

TOL = 1e-9


@dataclass
class Row:
    check: str
    measured: float
    bound: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {"check": self.check, "measured": self.measured, "bound": self.bound,
                "passed": self.passed, "note": self.note}


def verify_instance(K: SimplicialComplex, f: DomainFunction, U: Cover, dim_cap: int = 2) -> list[Row]:
    rows: list[Row] = []
    m = mapper(K, f, U, max(dim_cap, 2))
    delta = s_max(U)
    lam = lebesgue_number(U)
    mesh = check_mesh(K, f, U)

    rank, b1 = h1_pushforward_rank(m) if mesh is None else (None, betti(m.nerve, 1))
    if rank is None:
        rows.append(Row("H1 surjectivity", float("nan"), b1, False, f"simplex {mesh} fits in no element"))
    else:
        rows.append(Row("H1 surjectivity", rank, b1, rank == b1, "rank of pushed basis vs beta1(nerve)"))

    df = df_metric(K, f, "exact")
    rep = claim_report(m, df)
    ok = rep.holds(TOL)
    rows.append(Row("claim 1 (delta)", rep.claim1, delta, ok["claim1"]))
    rows.append(Row("claim 2 (3 delta)", rep.claim2, 3 * delta, ok["claim2"]))
    rows.append(Row("claim 3 (5 delta)", rep.claim3, 5 * delta, ok["claim3"]))
    rows.append(Row("distortion 5 delta", rep.distortion, 5 * delta, ok["distortion"]))

    dd = d_delta_metric(m)
    worst = 0.0
    for k in (0, 1):
        a = persistence_diagram(cech_filtration(dd, 2), k)
        b = persistence_diagram(cech_filtration(df, 2), k)
        worst = max(worst, bottleneck_distance(a, b))
    rows.append(Row("Cech bound 10 delta", worst, 10 * delta, worst <= 10 * delta + TOL, "max over H0, H1"))

    if mesh is None:
        try:
            basis = minimal_generator_basis(K, df, "exact")
            mode = "exact"
        except GuardExceeded:
            basis = minimal_generator_basis(K, df, "greedy")
            mode = "greedy"
        report = classify_survival(basis, m, U)
        verdicts = ",".join(f"{e['size']:g}:{e['verdict']}" for e in report.entries)
        rows.append(Row("death window", lam, 4 * delta, report.ok, f"{mode} basis {verdicts}"))
    return rows


def format_table(rows: list[Row]) -> str:
    head = f"{'check':<22} {'measured':>10} {'bound':>10}  result"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.check:<22} {r.measured:>10.4g} {r.bound:>10.4g}  {'PASS' if r.passed else 'FAIL'}"
                     + (f"  ({r.note})" if r.note else ""))
    return "\n".join(lines)
