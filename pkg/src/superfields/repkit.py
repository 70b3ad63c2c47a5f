"""sl(3) + sl(2) + gl(1) weight bookkeeping for the vle(3|6) form modules.

A weight ``(p,q;r;y)`` is a lowest weight with sl(3) labels ``p, q``, sl(2)
label ``r`` and hypercharge ``y``.  The four form-module families are

    A(p,r) = (p,0;r; 2p/3 - r)        B(p,r) = (p,0;r; 2p/3 + r + 2)
    C(q,r) = (0,q;r; -2q/3 - r - 2)   D(q,r) = (0,q;r; -2q/3 + r)

and everything else here is computed from these four formulas.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction


def qtext(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class Weight:
    p: int
    q: int
    r: int
    y: Fraction

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise ValueError("sl(3) and sl(2) labels must be nonnegative")
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """``"(0,1;1;1/3)"`` or ``"0,1;1;1/3"``."""
        body = text.strip().strip("()")
        try:
            pq, r, y = body.split(";")
            p, q = pq.split(",")
            return cls(int(p), int(q), int(r), Fraction(y))
        except ValueError as exc:
            raise ValueError(f"cannot parse weight {text!r}") from exc

    def __str__(self):
        return f"({self.p},{self.q};{self.r};{qtext(self.y)})"


FAMILIES = ("A", "B", "C", "D")
CP_SWAP = {"A": "D", "D": "A", "B": "C", "C": "B"}


@dataclass(frozen=True, order=True)
class FormModuleId:
    """``family`` in A..D; ``a`` is p for A, B and q for C, D."""

    family: str
    a: int
    r: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.a < 0 or self.r < 0:
            raise ValueError("form module parameters must be nonnegative")

    def __str__(self):
        return f"Omega_{self.family}({self.a},{self.r})"


def form_module_weight(fid: FormModuleId) -> Weight:
    a, r = fid.a, fid.r
    t = Fraction(2, 3) * a
    if fid.family == "A":
        return Weight(a, 0, r, t - r)
    if fid.family == "B":
        return Weight(a, 0, r, t + r + 2)
    if fid.family == "C":
        return Weight(0, a, r, -t - r - 2)
    return Weight(0, a, r, -t + r)


def classify_weight(w: Weight) -> list[FormModuleId]:
    """Every form module whose lowest weight is ``w``.

    Each family fixes its parameters from the sl(3) and sl(2) labels, so the
    linear system per family is solved by reading them off and checking the
    remaining two equations.
    """
    out = []
    for fam in FAMILIES:
        if fam in "AB":
            if w.q:
                continue
            fid = FormModuleId(fam, w.p, w.r)
        else:
            if w.p:
                continue
            fid = FormModuleId(fam, w.q, w.r)
        if form_module_weight(fid) == w:
            out.append(fid)
    return out


def cp_conjugate(fid: FormModuleId) -> FormModuleId:
    return FormModuleId(CP_SWAP[fid.family], fid.a, fid.r)


def electric_charges(w: Weight) -> list[Fraction]:
    """``y/2 + r/2`` down to ``y/2 - r/2`` in unit steps."""
    top = w.y / 2 + Fraction(w.r, 2)
    return [top - k for k in range(w.r + 1)]


def hypercharge_from_grading(z) -> Fraction:
    return Fraction(z) / 3


def irrep_dimension(w: Weight) -> int:
    return (w.p + 1) * (w.q + 1) * (w.p + w.q + 2) // 2 * (w.r + 1)


def all_form_modules(bound: int) -> list[FormModuleId]:
    return [FormModuleId(f, a, r) for f in FAMILIES for a in range(bound + 1) for r in range(bound + 1)]


# ---- the fermion table ------------------------------------------------------

# multiplet, printed charges (printed order), three generations, printed form
_PRINTED = [
    ("(0,1;1;1/3)", ["2/3", "-1/3"], ["(u_L,d_L)", "(c_L,s_L)", "(t_L,b_L)"], "Omega_D(1,1)"),
    ("(1,0;1;-1/3)", ["-2/3", "1/3"], ["(~u_R,~d_R)", "(~c_R,~s_R)", "(~t_R,~b_R)"], "Omega_A(1,1)"),
    ("(1,0;0;-4/3)", ["-2/3"], ["~u_L", "~c_L", "~t_L"], "-"),
    ("(0,1;0;4/3)", ["2/3"], ["u_R", "c_R", "t_R"], "-"),
    ("(0,1;0;-2/3)", ["-1/3"], ["d_R", "s_R", "b_R"], "Omega_D(1,0)"),
    ("(1,0;0;2/3)", ["1/3"], ["~d_L", "~s_L", "~b_L"], "Omega_A(1,0)"),
    ("(0,0;1;-1)", ["0", "-1"], ["(nu_eL,e_L)", "(nu_muL,mu_L)", "(nu_tauL,tau_L)"], "Omega_A(0,1)"),
    ("(0,0;1;1)", ["0", "1"], ["(~nu_eR,~e_R)", "(~nu_muR,~mu_R)", "(~nu_tauR,~tau_R)"], "Omega_D(0,1)"),
    ("(0,0;0;2)", ["1"], ["~e_L", "~mu_L", "~tau_L"], "Omega_C(0,0)"),
    ("(0,0;0;-2)", ["-1"], ["e_R", "mu_R", "tau_R"], "Omega_B(0,0)"),
]


@dataclass(frozen=True)
class ParticleRow:
    multiplet: Weight
    printed_charges: tuple
    names: tuple
    printed_form: str
    charges: tuple
    classified: tuple

    @property
    def charges_match(self) -> bool:
        # the printed lists do not follow one order, so compare as multisets
        return Counter(self.printed_charges) == Counter(self.charges)

    @property
    def classified_form(self) -> str:
        return " = ".join(str(f) for f in self.classified) or "-"

    @property
    def form_match(self) -> bool:
        if self.printed_form == "-":
            return not self.classified
        return self.printed_form in {str(f) for f in self.classified}

    @property
    def discrepancy(self) -> str:
        out = []
        if not self.charges_match:
            out.append("charges differ from the charge formula")
        if not self.form_match:
            out.append(f"printed {self.printed_form} but formulas give {self.classified_form}")
        return "; ".join(out)

    def record(self) -> dict:
        return {
            "multiplet": str(self.multiplet),
            "charges": ", ".join(qtext(c) for c in self.charges),
            "printed_charges": ", ".join(qtext(c) for c in self.printed_charges),
            "generation1": self.names[0],
            "generation2": self.names[1],
            "generation3": self.names[2],
            "dimension": irrep_dimension(self.multiplet),
            "form": self.printed_form,
            "classified_form": self.classified_form,
            "discrepancy": self.discrepancy,
        }


@dataclass
class FermionTable:
    rows: list

    @property
    def discrepancies(self) -> list:
        return [r for r in self.rows if r.discrepancy]

    @property
    def charges_all_match(self) -> bool:
        return all(r.charges_match for r in self.rows)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "table": "fermions",
            "rows": [r.record() for r in self.rows],
            "agreements": sum(1 for r in self.rows if not r.discrepancy),
            "discrepancies": [{"multiplet": str(r.multiplet), "detail": r.discrepancy} for r in self.discrepancies],
        }

    def to_csv(self) -> str:
        return records_to_csv([r.record() for r in self.rows])


def fermion_table() -> FermionTable:
    rows = []
    for mult, charges, names, form in _PRINTED:
        w = Weight.parse(mult)
        rows.append(
            ParticleRow(
                w,
                tuple(Fraction(c) for c in charges),
                tuple(names),
                form,
                tuple(electric_charges(w)),
                tuple(classify_weight(w)),
            )
        )
    return FermionTable(rows)


def form_module_table(bound: int = 2) -> list[dict]:
    out = []
    for fid in all_form_modules(bound):
        w = form_module_weight(fid)
        out.append(
            {
                "form": str(fid),
                "weight": str(w),
                "dimension": irrep_dimension(w),
                "charges": ", ".join(qtext(c) for c in electric_charges(w)),
                "cp_conjugate": str(cp_conjugate(fid)),
                "also": " = ".join(str(f) for f in classify_weight(w) if f != fid) or "-",
            }
        )
    return out


def records_to_csv(records: list[dict]) -> str:
    if not records:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()
