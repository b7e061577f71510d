"""
One strategy per verification suite.

A strategy turns a seeded generator and a dimension into the certificates of
one trial; TrialRunner derives the per-trial seed, runs the strategy and
folds the certificates into a TrialOutcome.
"""
from abc import ABC, abstractmethod
import logging
from typing import Dict, List, Optional, Tuple, Type

import numpy as np

from ..builders.certificate_builder import CertificateBuilder
from ..exceptions import LabException
from ..models.certificate import CertificateStatus, ConstructionCertificate
from ..models.class_spec import ClassSpec, Family
from ..models.operator_pair import DKind, OperatorPair
from ..config.tolerance import ToleranceConfig
from ..models.trial import TrialOutcome
from ..services.calculus_service import CalculusService
from ..services.class_service import ClassService
from ..services.spectral_service import SpectralService
from ..services.structure_service import StructureService
from ..services.theorem_service import TheoremService
from .linalg import adjoint, frobenius, matrix_power
from .random_matrices import (
    complex_gaussian,
    derive_seed,
    make_rng,
    polynomial_in,
    strictly_upper,
    unimodular,
    unimodular_diagonal,
    well_conditioned,
)

logger = logging.getLogger(__name__)

_SEVERITY = {CertificateStatus.passed: 0, CertificateStatus.vacuous: 1, CertificateStatus.failed: 2}


def _sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 62))


def _kind(rng: np.random.Generator) -> DKind:
    return DKind.delta if rng.uniform() < 0.5 else DKind.small_delta


def _signed(rng: np.random.Generator, low: float = 0.5, high: float = 1.0) -> float:
    return float(rng.choice([-1.0, 1.0]) * rng.uniform(low, high))


class TrialStrategy(ABC):
    """Abstract base class for suite strategies"""

    # Smallest dimension the strategy can work in; smaller draws are raised to it
    minimum_dim: int = 1

    def __init__(self, tol: Optional[ToleranceConfig] = None, sabotage: bool = False):
        self.tol = tol or ToleranceConfig()
        self.sabotage = sabotage
        self.calculus = CalculusService(self.tol)
        self.spectral = SpectralService(self.tol, self.calculus)
        self.classes = ClassService(self.tol, self.calculus, self.spectral)
        self.structure = StructureService(self.tol, self.calculus, self.spectral, self.classes)
        self.theorems = TheoremService(self.tol, self.calculus, self.structure)

    @abstractmethod
    def run_trial(self, rng: np.random.Generator, dim: int) -> List[ConstructionCertificate]:
        """Certificates of one trial"""
        pass

    @abstractmethod
    def get_suite_name(self) -> str:
        pass

    def _builder(self, name: str) -> CertificateBuilder:
        return CertificateBuilder(self.tol).set_name(name)

    def _break(self, rng: np.random.Generator, matrix: np.ndarray) -> np.ndarray:
        """Add a random matrix when sabotage is on"""
        if not self.sabotage:
            return matrix
        return matrix + complex_gaussian(rng, matrix.shape)


class CalculusTrial(TrialStrategy):
    """Recursive against closed-form powers, the adjoint duality at I and both binomial expansions"""

    def get_suite_name(self) -> str:
        return "calculus"

    def run_trial(self, rng, dim):
        kind = _kind(rng)
        m = int(rng.integers(0, 7))
        scale = 1.0 / np.sqrt(dim)
        t, s, x = (scale * complex_gaussian(rng, (dim, dim)) for _ in range(3))
        pair = OperatorPair(t, s, kind)
        builder = self._builder("calculus").set_metadata(kind=kind.value, m=m)

        closed = self.calculus.closed_sum(pair, x, m)
        recursive = self.calculus.d_power(pair, x, m)
        builder.add_residual("recursive_vs_closed", frobenius(recursive - closed.matrix), closed.scale)

        if m >= 1:
            identity = np.eye(dim, dtype=np.complex128)
            direct = self.calculus.closed_sum(pair, identity, m).matrix
            dual = self.calculus.closed_sum(self.calculus.adjoint_pair(pair), identity, m)
            sign = (-1) ** m if kind is DKind.small_delta else 1
            builder.add_residual("adjoint_duality", frobenius(dual.matrix - sign * adjoint(direct)), dual.scale)
        return [builder.build(), self._expansions(rng, dim)]

    def _expansions(self, rng, dim) -> ConstructionCertificate:
        """Both binomial expansions against d_power on commuting operands"""
        kind = _kind(rng)
        p = int(rng.integers(1, 5))
        identity = np.eye(dim, dtype=np.complex128)
        builder = self._builder("expansions").set_metadata(kind=kind.value, p=p)

        base = complex_gaussian(rng, (dim, dim)) / (2 * np.sqrt(dim))
        t1, s1, t2, s2 = (polynomial_in(rng, base) for _ in range(4))
        product = self.calculus.product_expansion(kind, t1, s1, t2, s2, p)
        direct = self.calculus.d_power(OperatorPair(t1 @ t2, s1 @ s2, kind), identity, p)
        builder.add_residual("product_expansion", frobenius(product.rhs - direct), product.scale)

        nilpotent = strictly_upper(rng, dim) / np.sqrt(dim)
        s = polynomial_in(rng, nilpotent)
        t = complex_gaussian(rng, (dim, dim)) / np.sqrt(dim)
        perturbation = self.calculus.perturbation_expansion(kind, t, s, nilpotent, p)
        direct = self.calculus.d_power(OperatorPair(t, s + nilpotent, kind), identity, p)
        builder.add_residual("perturbation_expansion", frobenius(perturbation.rhs - direct), perturbation.scale)

        for violation in product.hypothesis_violations + perturbation.hypothesis_violations:
            builder.add_hypothesis_violation(violation.name, violation.magnitude)
        return builder.build()


class ClassesTrial(TrialStrategy):
    """Generated instances classify at their strict order; power boundedness two ways"""

    def get_suite_name(self) -> str:
        return "classes"

    def _membership(self, rng, dim) -> ConstructionCertificate:
        families = list(Family)
        family = families[int(rng.integers(len(families)))]
        m = int(rng.integers(1, 4))
        n = int(rng.integers(0, 3)) if dim >= 2 else 0
        instance = self.classes.gen_instance(ClassSpec(family, m, n), dim, _sub_seed(rng))
        generated = instance.certificate

        pair = OperatorPair(instance.T, instance.S, family.kind)
        classification = self.classes.classify(pair, n, m, instance.C)
        k = generated.metadata["parameters"]["k"]
        expected = 2 * k - 1 if family.adjoint_partner else k

        builder = self._builder("classes").set_metadata(family=family.value, m=m, n=n, recipe=instance.recipe,
                                                         minimal_m=classification.minimal_m)
        builder.add_residual("generated", generated.residual_norm, generated.scale, threshold=generated.threshold)
        builder.add_residual("minimal_order_gap", abs((classification.minimal_m or m + 1) - expected), 1.0,
                             threshold=0.0)
        builder.add_residual("not_strict", float(not classification.strict), 1.0, threshold=0.0)
        return builder.build()

    def _power_boundedness(self, rng, dim) -> ConstructionCertificate:
        bounded = rng.uniform() < 0.5
        moduli = rng.uniform(0.2, 0.9, size=dim)
        moduli[0] = 1.0
        frame = np.diag(moduli * np.exp(2j * np.pi * rng.uniform(size=dim)))
        if not bounded:
            if dim >= 2 and rng.uniform() < 0.5:
                # Jordan block on the unit circle: linear growth
                frame[1, 1] = frame[0, 0]
                frame[0, 1] = 1.0
            else:
                frame[0, 0] *= 1.2
        v = well_conditioned(rng, dim, 0.8, 1.25)
        s = v @ frame @ np.linalg.inv(v)

        spectral_verdict = self.classes.is_power_bounded(s)
        short = self.classes.empirical_power_bound(s, 100)
        long = self.classes.empirical_power_bound(s, 1000)
        empirical_verdict = long < 2 * short

        builder = self._builder("power-boundedness").set_metadata(bounded=bounded, short_sup=short, long_sup=long)
        builder.add_residual("verdict_mismatch", float(spectral_verdict != empirical_verdict), 1.0, threshold=0.0)
        builder.add_residual("wrong_verdict", float(spectral_verdict != bounded), 1.0, threshold=0.0)
        return builder.build()

    def run_trial(self, rng, dim):
        return [self._membership(rng, dim), self._power_boundedness(rng, dim)]


class SpectralTrial(TrialStrategy):
    """Resolution of the identity by Riesz projections; real spectra of m-selfadjoint operators"""

    def get_suite_name(self) -> str:
        return "spectral"

    def run_trial(self, rng, dim):
        angles = 2 * np.pi * (np.arange(dim) + 0.5 * rng.uniform(size=dim)) / dim
        frame = np.diag(rng.uniform(0.5, 2.0, size=dim) * np.exp(1j * angles))
        jordan = dim >= 2 and rng.uniform() < 0.3
        if jordan:
            frame[1, 1] = frame[0, 0]
            frame[0, 1] = 1.0
        v = well_conditioned(rng, dim, 0.7, 1.4)
        a = v @ frame @ np.linalg.inv(v)

        report = self.spectral.spectral_report(a)
        projections = list(report.riesz.values())
        identity = np.eye(dim)
        builder = self._builder("spectral").set_metadata(jordan=jordan)
        builder.add_residual("resolution_of_identity", frobenius(sum(projections) - identity), float(dim))
        builder.add_residual("idempotent", max(frobenius(p @ p - p) for p in projections), float(dim))
        builder.add_residual("commutes", max(frobenius(a @ p - p @ a) for p in projections), float(dim))
        highest = max(info.pole_order for info in report.eigenvalues)
        builder.add_residual("pole_order_gap", abs(highest - (2 if jordan else 1)), 1.0, threshold=0.0)

        m = int(rng.integers(1, 4))
        selfadjoint = self.classes.gen_instance(ClassSpec(Family.m_selfadjoint, m), dim, _sub_seed(rng))
        return [builder.build(), self.spectral.real_spectrum_check(selfadjoint.S, m)]


class SimilarityTrial(TrialStrategy):
    """Similarity models (A, Q, P) and B for n-quasi classes"""

    minimum_dim = 2

    def get_suite_name(self) -> str:
        return "similarity"

    def run_trial(self, rng, dim):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 3))
        branch = int(rng.integers(3))
        if branch == 0:
            instance = self.classes.gen_instance(ClassSpec(Family.m_isometry, m, n), dim, _sub_seed(rng))
            return [self.structure.construct_AQP(DKind.delta, instance.S, m, n)]
        if branch == 1:
            instance = self.classes.gen_instance(ClassSpec(Family.m_isometry, m), dim, _sub_seed(rng))
            weighted = self.structure.construct_AQP(DKind.delta, instance.S, m, n)
            circle = self.spectral.point_spectrum_circle_check(weighted.matrix("A"), weighted.matrix("Q"), m)
            return [weighted, self.structure.construct_B(DKind.delta, instance.S, m, n), circle]
        instance = self.classes.gen_instance(ClassSpec(Family.m_selfadjoint, m), dim, _sub_seed(rng),
                                             shift=_signed(rng))
        return [
            self.structure.construct_AQP(DKind.small_delta, instance.S, m, n),
            self.structure.construct_B(DKind.small_delta, instance.S, m, n),
        ]


class ConjugatedTrial(TrialStrategy):
    """Similarity models for (m, C)-isometries and (m, C)-symmetries"""

    minimum_dim = 2

    def get_suite_name(self) -> str:
        return "conjugated"

    def run_trial(self, rng, dim):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 3))
        branch = int(rng.integers(3))
        if branch == 0:
            instance = self.classes.gen_instance(ClassSpec(Family.mc_isometry, m, n), dim, _sub_seed(rng))
            kind = DKind.delta
        elif branch == 1:
            instance = self.classes.gen_instance(ClassSpec(Family.mc_isometry, m), dim, _sub_seed(rng),
                                                 complex_tail=False)
            kind = DKind.delta
        else:
            instance = self.classes.gen_instance(ClassSpec(Family.mc_symmetry, m), dim, _sub_seed(rng),
                                                 complex_tail=False, shift=_signed(rng))
            kind = DKind.small_delta
        return [self.structure.construct_conjugated(kind, instance.S, instance.C, m, n)]


class LeftInverseTrial(TrialStrategy):
    """C_p·Sᵖ = I for left m-invertible pairs; unimodular semisimple spectra when power bounded"""

    def get_suite_name(self) -> str:
        return "left-inverse"

    def run_trial(self, rng, dim):
        m = int(rng.integers(1, 5))
        pair = self.classes.gen_instance(ClassSpec(Family.left_m_invertible_pair, m), dim, _sub_seed(rng))
        certificates = [self.structure.left_inverse_Cp(pair.T, pair.S, m, p) for p in (1, 2, 3)]

        isometry = self.classes.gen_instance(ClassSpec(Family.m_isometry, m), dim, _sub_seed(rng))
        certificates.append(self.structure.left_inverse_Cp(isometry.T, isometry.S, m, int(rng.integers(1, 4))))

        v = well_conditioned(rng, dim, 0.8, 1.25)
        s = v @ unimodular_diagonal(rng, dim) @ np.linalg.inv(v)
        t = np.linalg.inv(s)
        certificates.append(self.structure.left_inverse_Cp(t, s, 1, int(rng.integers(1, 4))))
        certificates.append(self.spectral.unimodular_semisimple_check(s, t, 1))
        return certificates


class RieszTrial(TrialStrategy):
    """The selfadjointness criterion against the Riesz projection at every eigenvalue"""

    minimum_dim = 2

    def get_suite_name(self) -> str:
        return "riesz"

    def run_trial(self, rng, dim):
        m = int(rng.choice([1, 1, 2, 3]))
        n = int(rng.integers(1, 3))
        instance = self.classes.gen_instance(ClassSpec(Family.m_isometry, m, n), dim, _sub_seed(rng))
        return [
            self.structure.riesz_selfadjoint_criterion(instance.S, instance.T, n, cluster.value, m)
            for cluster in self.spectral.eigen_data(instance.S)
        ]


class ProductsTrial(TrialStrategy):
    """The product theorem and its tensor, conjugated, isometric and selfadjoint forms"""

    minimum_dim = 2

    def get_suite_name(self) -> str:
        return "products"

    def _plain(self, rng, dim, m, n):
        base = self.classes.gen_instance(ClassSpec(Family.m_isometry, m, n), dim, _sub_seed(rng))
        s = base.S
        s1 = matrix_power(s, int(rng.integers(1, 3)))
        s2 = self._break(rng, unimodular(rng) * matrix_power(s, int(rng.integers(1, 3))))
        return self.theorems.verify_product_theorem(DKind.delta, s, s1, adjoint(s1), s2, adjoint(s2), m, m, n)

    def _tensor(self, rng, dim, m, n):
        first = self.classes.gen_instance(ClassSpec(Family.m_isometry, m, n), min(dim, 3), _sub_seed(rng))
        m2 = int(rng.integers(1, 3))
        second = self.classes.gen_instance(ClassSpec(Family.m_isometry, m2), int(rng.integers(2, 4)), _sub_seed(rng))
        b2 = self._break(rng, second.T)
        return self.theorems.product_tensor(DKind.delta, first.S, first.T, second.S, b2, m, m2, n)

    def _conjugated(self, rng, dim, m):
        # a real tail before transport keeps the powers of S bounded
        base = self.classes.gen_instance(ClassSpec(Family.mc_isometry, m), dim, _sub_seed(rng), complex_tail=False)
        s2 = float(rng.choice([-1.0, 1.0])) * matrix_power(base.S, int(rng.integers(1, 3)))
        return self.theorems.product_conjugated(DKind.delta, base.S, self._break(rng, s2), base.C, m, m)

    def _isometric(self, rng, dim, m, n):
        base = self.classes.gen_instance(ClassSpec(Family.m_isometry, m, n), dim, _sub_seed(rng))
        s2 = self._break(rng, unimodular(rng) * matrix_power(base.S, int(rng.integers(1, 3))))
        return self.theorems.product_isometric(base.S, s2, m, m, n)

    def _selfadjoint(self, rng, dim, m, n):
        # real polynomials in S stay in the class
        symmetric = rng.uniform() < 0.5
        family = Family.mc_symmetry if symmetric else Family.m_selfadjoint
        base = self.classes.gen_instance(ClassSpec(family, m, 0 if symmetric else n), dim, _sub_seed(rng))
        s = base.S
        a, b = rng.uniform(-1.0, 1.0, size=2)
        s2 = self._break(rng, a * s @ s + b * s + rng.uniform(-1.0, 1.0) * np.eye(dim))
        if symmetric:
            return self.theorems.product_selfadjoint(s, s2, m, m, C=base.C)
        return self.theorems.product_selfadjoint(s, s2, m, m, n, S=s)

    def run_trial(self, rng, dim):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(0, 3))
        return [
            self._plain(rng, dim, m, n),
            self._tensor(rng, dim, m, n),
            self._conjugated(rng, dim, m),
            self._isometric(rng, dim, m, max(n, 1)),
            self._selfadjoint(rng, dim, m, n),
        ]


class PerturbationTrial(TrialStrategy):
    """Commuting nilpotent perturbations: flat, isometric, conjugated and the similarity model"""

    minimum_dim = 3

    def get_suite_name(self) -> str:
        return "perturbation"

    def _nilpotent_of(self, rng, s: np.ndarray, u: complex, n: int, real: bool = False) -> np.ndarray:
        # c·(S − u)·Sⁿ: a polynomial in S, nilpotent when S1 = u(I + J) and S2ⁿ = 0
        c = float(rng.uniform(0.5, 1.5)) if real else complex(rng.uniform(0.5, 1.5) * unimodular(rng))
        nilpotent = c * (s - u * np.eye(s.shape[0])) @ matrix_power(s, n)
        if self.sabotage:
            nilpotent = nilpotent + np.triu(complex_gaussian(rng, s.shape), 1)
        return nilpotent

    def _flat(self, rng, dim):
        kind = _kind(rng)
        family = Family.left_m_invertible_pair if kind is DKind.delta else Family.m_intertwined_pair
        k = int(rng.integers(1, 4))
        pair = self.classes.gen_instance(ClassSpec(family, k), dim, _sub_seed(rng))
        k = pair.certificate.metadata["parameters"]["k"]
        nilpotent = pair.T - (np.linalg.inv(pair.S) if kind is DKind.delta else pair.S)
        n1 = self._break(rng, nilpotent)
        return self.theorems.perturbation_flat(kind, pair.S, pair.T, n1, nilpotent, k, k, k)

    def _jordan_base(self, rng, family: Family, n: int, k: int):
        # dimension k + n leaves no tail beside the Jordan block, so S1 − u is nilpotent
        m = 2 * k - 1
        if family is Family.m_selfadjoint:
            u = _signed(rng)
            instance = self.classes.gen_instance(ClassSpec(family, m, n), k + n, _sub_seed(rng), k=k, shift=u)
        else:
            u = float(rng.choice([-1.0, 1.0])) if family.uses_conjugation else unimodular(rng)
            instance = self.classes.gen_instance(ClassSpec(family, m, n), k + n, _sub_seed(rng), k=k, u=u)
        return instance, m, u

    def run_trial(self, rng, dim):
        form = int(rng.integers(4))
        n = int(rng.integers(1, 3))
        if form == 0:
            return [self._flat(rng, dim)]
        k = int(rng.integers(2, 4))
        if form == 1:
            kind = _kind(rng)
            family = Family.m_isometry if kind is DKind.delta else Family.m_selfadjoint
            instance, m, u = self._jordan_base(rng, family, n, k)
            nilpotent = self._nilpotent_of(rng, instance.S, u, n)
            return [self.theorems.perturbation_isometric(kind, instance.S, nilpotent, m, n, k)]
        if form == 2:
            instance, m, u = self._jordan_base(rng, Family.mc_isometry, n, k)
            nilpotent = self._nilpotent_of(rng, instance.S, u, n, real=True)
            return [self.theorems.perturbation_conjugated(DKind.delta, instance.S, nilpotent, instance.C, m, n, k)]
        instance, m, u = self._jordan_base(rng, Family.m_isometry, n, k)
        nilpotent = self._nilpotent_of(rng, instance.S, u, n)
        return [self.structure.construct_perturbed_similarity(DKind.delta, instance.S, nilpotent, m, n, k)]


class TrialRunner:
    """Runs one seeded trial of one suite using the Strategy pattern"""

    # Available strategies
    _strategies: Dict[str, Type[TrialStrategy]] = {
        'calculus': CalculusTrial,
        'classes': ClassesTrial,
        'spectral': SpectralTrial,
        'similarity': SimilarityTrial,
        'conjugated': ConjugatedTrial,
        'left-inverse': LeftInverseTrial,
        'riesz': RieszTrial,
        'products': ProductsTrial,
        'perturbation': PerturbationTrial,
    }

    def __init__(self, strategy: TrialStrategy):
        self.strategy = strategy

    @classmethod
    def create_with_suite(cls, suite: str, tol: Optional[ToleranceConfig] = None,
                          sabotage: bool = False) -> "TrialRunner":
        """Factory method to create a TrialRunner for one suite"""
        if suite not in cls._strategies:
            raise ValueError(f"Unsupported suite: {suite}. Available: {list(cls._strategies.keys())}")
        return cls(cls._strategies[suite](tol, sabotage))

    @classmethod
    def available_suites(cls) -> List[str]:
        return list(cls._strategies.keys())

    def get_suite_name(self) -> str:
        return self.strategy.get_suite_name()

    def run(self, seed: int, trial: int, dims: Tuple[int, int]) -> TrialOutcome:
        """Run one trial; it depends only on (seed, suite, trial)"""
        suite = self.get_suite_name()
        sub_seed = derive_seed(seed, suite, trial)
        rng = make_rng(sub_seed)
        low, high = dims
        dim = max(int(rng.integers(low, high + 1)), self.strategy.minimum_dim)

        try:
            certificates = self.strategy.run_trial(rng, dim)
        except LabException as e:
            logger.warning("Trial %d of %s (seed %d) raised: %s", trial, suite, sub_seed, e)
            return TrialOutcome(suite=suite, trial=trial, seed=sub_seed, dim=dim,
                                status=CertificateStatus.failed, worst_residual=float("inf"),
                                detail=str(e))

        status = max((c.status for c in certificates), key=_SEVERITY.get, default=CertificateStatus.passed)
        worst = max((c.worst_residual() for c in certificates), default=0.0)
        logger.debug("Trial %d of %s (seed %d, dim %d): %s", trial, suite, sub_seed, dim, status.value)
        return TrialOutcome(
            suite=suite,
            trial=trial,
            seed=sub_seed,
            dim=dim,
            status=status,
            worst_residual=worst,
            certificates=tuple((c.name, c.status) for c in certificates),
        )
