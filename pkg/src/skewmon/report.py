"""Structured check records shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .exactlin import Mat

PASS, FAIL, NOT_VERIFIED = "pass", "fail", "not-verified"

# Human-readable anchors for every check id.  They name the law being checked,
# so a report can be read without any other document at hand.
ANCHORS: dict[str, str] = {
    # right-monoidal axioms
    "SMC1": "right-monoidal axioms: pentagon for the skew-associator gamma",
    "SMC2": "right-monoidal axioms: gamma against the left unit eta",
    "SMC3": "right-monoidal axioms: gamma against the right counit eps",
    "SMC4": "right-monoidal axioms: middle unit triangle (eps * N).gamma.(M * eta) = id",
    "SMC5": "right-monoidal axioms: eps_R . eta_R = id",
    "NAT.gamma": "naturality of the skew-associator gamma",
    "NAT.eta": "naturality of the left unit eta",
    "NAT.eps": "naturality of the right counit eps",
    "FUNCT.prod": "bifunctoriality of the product on probe maps",
    # canonical monad / comonad / distributive law
    "SMC10": "canonical monad T = R * -: left unit law mu.eta_T = id",
    "SMC11": "canonical monad T = R * -: right unit law mu.T(eta) = id",
    "MONAD.assoc": "canonical monad T = R * -: associativity of mu",
    "SMC12": "canonical comonad Q = - * R: counit law eps_Q.delta = id",
    "SMC13": "canonical comonad Q = - * R: counit law Q(eps).delta = id",
    "COMONAD.coassoc": "canonical comonad Q = - * R: coassociativity of delta",
    "SMC14": "distributive law chi = gamma_{R,M,R}: compatibility with mu",
    "SMC15": "distributive law chi = gamma_{R,M,R}: compatibility with delta",
    "SMC16": "distributive law chi = gamma_{R,M,R}: compatibility with eta",
    "SMC17": "distributive law chi = gamma_{R,M,R}: compatibility with eps",
    # two-argument maps
    "TWO.delta_coassoc": "two-argument delta_{K,L}: coassociativity relation",
    "TWO.delta_counit": "two-argument delta_{K,L}: counit relation",
    "TWO.mu_assoc": "two-argument mu_{K,L}: associativity relation",
    "TWO.mu_unit": "two-argument mu_{K,L}: unit relation",
    "GALOIS.identity": "skew-associator as Galois map: mu_{QM,N}.delta_{M,TN} = gamma_{M,R,N}",
    "COMPAT.hexagon": "bialgebra-like compatibility diagram of mu_R and delta_R through sigma",
    "COMPAT.chi_row": "delta_R.mu_R = (mu_R * R).gamma_{R,R*R,R}.(R * delta_R)",
    "COMPAT.witness": "coherence failure witness: delta_R.mu_R differs from gamma_{R,R,R}",
    # skew-monoidal functors
    "smf1": "right-monoidal functor: hexagon for F_2 against gamma",
    "smf2": "right-monoidal functor: unit compatibility F_{R,X}.(F_0 * FX).eta = F(eta)",
    "smf3": "right-monoidal functor: counit compatibility F(eps).F_{X,R}.(FX * F_0) = eps",
    "MNAT.product": "monoidal natural transformation: compatibility with F_2 and G_2",
    "MNAT.unit": "monoidal natural transformation: compatibility with F_0 and G_0",
    "MM.mult": "monad morphism induced by a right-monoidal functor: multiplication",
    "MM.unit": "monad morphism induced by a right-monoidal functor: unit",
    "CM.comult": "comonad morphism induced by a right-opmonoidal functor: comultiplication",
    "CM.counit": "comonad morphism induced by a right-opmonoidal functor: counit",
    "DUAL.involution": "op-rev dualization is an involution",
    # bialgebroids
    "ALG.R": "base algebra R is associative and unital",
    "BGD.ring": "bialgebroid: H is an associative unital ring",
    "BGD.source": "bialgebroid: source map s is a unital algebra map",
    "BGD.target": "bialgebroid: target map t is a unital anti-algebra map",
    "BGD.st_commute": "bialgebroid: images of s and t commute",
    "BGD.actions": "bialgebroid: the four R-actions on H commute as required",
    "BGD.coring_bimodule": "bialgebroid: Delta and eps are R-bimodule maps (coring over lambda1/rho2)",
    "BGD.coassoc": "bialgebroid: coassociativity of Delta",
    "BGD.counit": "bialgebroid: counit laws of the R-coring",
    "BGD.takeuchi": "bialgebroid: Delta lands in the Takeuchi product",
    "BGD.multiplicative": "bialgebroid: Delta is multiplicative and unital on the Takeuchi product",
    "BGD.counit_mult": "bialgebroid: eps(g s(eps h)) = eps(gh) = eps(g t(eps h)) and eps(1) = 1",
    "BGD.discrepancy": "bialgebroid axiom list versus induced right-monoidal structure",
    "BGD.welldefined": "well-definedness of the induced structure maps on balanced tensors",
    "BGD.galois": "Galois map H (x)_R2 H -> H (x)_R1 H, g (x) h -> h(1) (x) g h(2)",
    "BGD.hopf": "Hopf criterion: Galois map invertible iff gamma_{R,R,R} invertible",
    # E-objects
    "EOBJ.actions": "product of E-objects is a (2,1)-type E-object",
    "LR.gamma_lambda": "lambda-rho table: lambda_i commutes with gamma",
    "LR.eta_lambda": "lambda-rho table: lambda_2.eta_N = eta_N.lambda_1",
    "LR.eps_lambda": "lambda-rho table: lambda_1.eps_L = eps_L.lambda_1",
    "LR.mu_lambda1": "lambda-rho table: lambda_1.mu_N = mu_N.lambda_1",
    "LR.mu_lambda2": "lambda-rho table: lambda_2.mu_N = mu_N.lambda_3",
    "LR.delta_lambda3": "lambda-rho table: lambda_3.delta_L = delta_L.lambda_2",
    "LR.delta_lambda1": "lambda-rho table: lambda_1.delta_L = delta_L.lambda_1",
    "LR.gamma_rho": "lambda-rho table: rho_i commutes with gamma",
    "LR.eta_rho": "lambda-rho table: rho_1.eta_N = lambda_1.eta_N",
    "LR.eps_rho": "lambda-rho table: eps_L.rho_1 = eps_L.lambda_2",
    "LR.mu_rho": "lambda-rho table: rho_1.mu_N = mu_N.rho_2",
    "LR.delta_rho1": "lambda-rho table: rho_1.delta_L = delta_L.rho_1",
    "LR.mu_rho_lambda": "lambda-rho table: mu_N.rho_1 = mu_N.lambda_2",
    "LR.delta_rho2": "lambda-rho table: rho_2.delta_L = lambda_2.delta_L",
    "THETA.equivariant": "theta = q.z is a map of E-objects",
    "QSTRUCT.factor": "quotient structure: gamma^q, eps^q factor uniquely through coequalizers",
    "ZSTRUCT.factor": "center structure: gamma^z, eta^z factor uniquely through equalizers",
    "KAPPA.mult": "kappa = q_{R,-}: monad morphism T_q -> T, multiplication",
    "KAPPA.unit": "kappa = q_{R,-}: monad morphism T_q -> T, unit",
    "ZETA.comult": "zeta = z_{-,R}: comonad morphism Q^z -> Q, comultiplication",
    "ZETA.counit": "zeta = z_{-,R}: comonad morphism Q^z -> Q, counit",
    "act1": "T-module: associativity of the action",
    "act2": "T-module: unit law of the action",
    "coact1": "Q-comodule: coassociativity of the coaction",
    "coact2": "Q-comodule: counit law of the coaction",
    "modmap": "T-module morphism condition",
    "comodmap": "Q-comodule morphism condition",
    "COMOD.split": "the coaction is a split equalizer of delta and coaction * R, split by eps",
    "ENTWINED.square": "entwined module: Delta.nabla = Q(nabla).chi.T(Delta)",
    "EACT.monoid": "induced E-action is a monoid morphism into right-module maps",
    "EACT.equivariant": "(co)module maps are maps of induced E-objects",
    "EACT.free": "induced E-action on a free (co)module is the canonical one",
    "FACTOR.coaction": "coaction factorizes uniquely through the center z_{L,R}",
    "FACTOR.action": "action factorizes uniquely through the quotient q_{R,M}",
    "PHIQ.square": "phi_q commutes with the Eilenberg-Moore forgetful functors",
    "PHIQ.bijection": "phi_q is bijective on module hom-sets",
    "TQ.tensor": "T_q N is isomorphic to N (x)_{R^e} H naturally",
    # lax comonad
    "DELTA.decompose": "monotone maps decompose into elementary maps",
    "LAXQ.mono": "zeta^n is a monomorphism",
    "LAXQ.factor": "delta^n_i, eps^n_i and nu factor uniquely through zeta",
    "LAXQ.equalizer": "tuple-indexed and factor-wise equalizer descriptions of Q_n agree",
    "LAXQ.degenerate": "one-dimensional E: Q_n coincides with Q^n",
    "COSIMP.delta_delta": "simplicial identity among the delta^n_i",
    "COSIMP.eps_eps": "simplicial identity among the eps^n_i",
    "COSIMP.eps_delta": "simplicial identity between eps and delta",
    "NU.assoc": "lax monoidal constraint: associativity of nu",
    "NU.unit": "lax monoidal constraint: nu^{0,n} = id = nu^{m,0}",
    "NU.natural_delta": "naturality of nu against delta",
    "NU.natural_eps": "naturality of nu against eps",
    "LAXCOMOD.face": "lax comodule: G_f.alpha_n = alpha_m",
    "LAXCOMOD.mult": "lax comodule: alpha_{m+n} = nu.G_m(alpha_n).alpha_m",
    "LAXCOMOD.unit": "lax comodule: alpha_0 = iota",
    "PHIHAT.lift": "lift of a Q-comodule along zeta^n",
    "PHIHAT.roundtrip": "forgetting the lifted lax comodule recovers the coaction",
    "QN.solve": "monoidal structure of Q_n solves uniquely from the evaluation diagrams",
    "QN.compare": "Hom(P_n, -) model of Q_n agrees with the equalizer model",
    "QN.assoc": "Q_n is a monoidal functor: associativity",
    "QN.unit": "Q_n is a monoidal functor: unit laws",
    "QN.delta_square": "delta^n_i is a monoidal natural transformation",
    "QN.eps_square": "eps^n_i is a monoidal natural transformation",
    "QN.nu_square": "nu^{m,n} is a monoidal natural transformation",
    # bimonads and representability
    "MONAD.O": "bimonad: monad laws of O",
    "opmon1": "opmonoidal monad: coassociativity of O^{M,N}",
    "opmon2": "opmonoidal monad: left counit of O^{M,N}",
    "opmon3": "opmonoidal monad: right counit of O^{M,N}",
    "opmon4": "opmonoidal monad: multiplication is opmonoidal",
    "opmon5": "opmonoidal monad: multiplication against O^0",
    "opmon6": "opmonoidal monad: unit is opmonoidal",
    "opmon7": "opmonoidal monad: O^0 . iota_R = id",
    "H0": "fusion operator: naturality against the multiplication",
    "H1": "fusion operator: pentagon",
    "H2": "fusion operator: unit iota",
    "H3": "fusion operator: left unit with O^0",
    "H4": "fusion operator: right unit with O^0",
    "H5": "fusion operator: multiplication",
    "H6": "fusion operator: O^0 . iota_R = id",
    "FUSION.roundtrip_O": "bijection opmonoidal structures -> fusion operators -> opmonoidal structures",
    "FUSION.roundtrip_h": "bijection fusion operators -> opmonoidal structures -> fusion operators",
    "BIMONAD.induced": "bimonad-induced right-monoidal structure M (x) ON",
    "BIMONAD.monad_morphism": "unit-induced map O -> T is a monad morphism",
    "TET.P*": "tetrahedral homomorphism: compatibility with the associator",
    "TET.P**": "tetrahedral homomorphism: compatibility with gamma",
    "TET.unit": "tetrahedral homomorphism: unit triangle",
    "TET.counit": "tetrahedral homomorphism: counit triangle",
    "TET.roundtrip": "bijection between tetrahedral homomorphisms and w",
    "W.invertible": "w_{M,N}: M (x) TN -> M * N is invertible",
    "W.descend": "w on the quotient product descends uniquely from the canonical w",
    "W.normalized": "w_{R,N} . lambda^{-1}_{TN} = id",
    "HEPTAGON": "heptagon equation for w",
    "TETRAGON": "tetragon equation for w",
    "TW.compare": "opmonoidal T from w agrees with - (x) H and the comultiplication",
    "TW.T0": "opmonoidal T from w: T^0 = eps_R",
    "twist1": "twist: compatibility with the skew-associators",
    "twist2": "twist: compatibility with the units",
    "twist3": "twist: compatibility with the counits",
    "REPR.verdict": "representability certificate chain",
    "COREPR.verdict": "corepresentability certificate chain (op-rev dual)",
    "COREPR.comonad": "monoidal comonad data Q_{M,N}, Q_0 from the dual certificate",
    "SUITE.error": "suite could not be run: the instance data is structurally inconsistent",
    "MUTATION.coverage": "seeded corruption produces a named failure",
}


@dataclass
class Check:
    check_id: str
    subject: str
    status: str
    detail: str = ""
    witness: dict[str, Mat] = field(default_factory=dict)
    anchor: str = ""

    def __post_init__(self):
        if not self.anchor:
            self.anchor = ANCHORS.get(self.check_id, self.check_id)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        out = {
            "check": self.check_id,
            "anchor": self.anchor,
            "subject": self.subject,
            "status": self.status,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.witness:
            out["witness"] = {k: v.tolist() for k, v in sorted(self.witness.items())}
        return out


class Report:
    """An ordered collection of checks."""

    def __init__(self, checks: Iterable[Check] = ()):
        self.checks: list[Check] = list(checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report | Iterable[Check]") -> "Report":
        self.checks.extend(other.checks if isinstance(other, Report) else other)
        return self

    def equal(self, check_id: str, subject: str, lhs: Mat, rhs: Mat, detail: str = "") -> Check:
        """Record whether two matrices agree exactly."""
        if lhs.shape != rhs.shape:
            return self.add(
                Check(check_id, subject, NOT_VERIFIED, f"structural error: shapes {lhs.shape} vs {rhs.shape}")
            )
        if lhs == rhs:
            return self.add(Check(check_id, subject, PASS, detail))
        return self.add(Check(check_id, subject, FAIL, detail, {"lhs": lhs, "rhs": rhs}))

    def truth(self, check_id: str, subject: str, ok: bool, detail: str = "", witness=None) -> Check:
        return self.add(Check(check_id, subject, PASS if ok else FAIL, detail, dict(witness or {})))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def ids(self, status: str | None = None) -> set[str]:
        return {c.check_id for c in self.checks if status is None or c.status == status}

    def failed_ids(self) -> set[str]:
        return {c.check_id for c in self.checks if not c.ok}

    def by_id(self, check_id: str) -> list[Check]:
        return [c for c in self.checks if c.check_id == check_id]

    def passed(self, check_id: str) -> bool:
        found = self.by_id(check_id)
        return bool(found) and all(c.ok for c in found)

    def sorted(self) -> "Report":
        return Report(sorted(self.checks, key=lambda c: (c.check_id, c.subject)))

    def __len__(self) -> int:
        return len(self.checks)

    def __iter__(self):
        return iter(self.checks)

    def summary(self) -> str:
        n = len(self.checks)
        bad = len(self.failures())
        return f"{n - bad}/{n} checks pass"
