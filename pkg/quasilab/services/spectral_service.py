"""
Finite-dimensional spectral computations: clustered eigenvalues, ascent and
descent, Riesz idempotents, and the spectral checks built on them.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..builders.certificate_builder import CertificateBuilder
from ..exceptions import DomainError, LabException, NumericalError
from ..models.certificate import ConstructionCertificate
from ..models.operator_pair import DKind, OperatorPair
from ..models.spectral import (
    AscentDescent,
    EigenCluster,
    EigenInfo,
    ProjectionFlags,
    RieszProjection,
    SpectralReport,
)
from ..config.tolerance import ToleranceConfig
from ..utils.linalg import (
    adjoint,
    as_matrix,
    frobenius,
    kernel_basis,
    matrix_power,
    numerical_rank,
    op_norm,
    rank_and_bases,
)
from .calculus_service import CalculusService

logger = logging.getLogger(__name__)


class SpectralService:
    """Service layer for eigenvalues, poles and Riesz projections"""

    # Cap on the relative radius within which split eigenvalues may be rejoined
    MAX_SCATTER_REL = 0.05

    def __init__(self, tol: Optional[ToleranceConfig] = None,
                 calculus: Optional[CalculusService] = None):
        self.tol = tol or ToleranceConfig()
        self.calculus = calculus or CalculusService(self.tol)

    # Eigenvalues

    def cluster_radius(self, A: np.ndarray) -> float:
        return self.tol.cluster_rel * op_norm(A)

    def scatter_radius(self, A: np.ndarray, multiplicity: int) -> float:
        """How far rounding can split a pole of the given multiplicity: about ε^{1/k}, capped"""
        spread = 10.0 * np.finfo(float).eps ** (1.0 / multiplicity)
        return max(self.tol.cluster_rel, min(spread, self.MAX_SCATTER_REL)) * max(op_norm(A), 1.0)

    def _is_single_pole(self, a: np.ndarray, center: complex, multiplicity: int) -> bool:
        # (A − μ) singular and (A − μ)^k of nullity k, judged as ascent_descent judges ranks
        dim = a.shape[0]
        shifted = a - center * np.eye(dim)
        base = max(op_norm(shifted), 1.0)
        if numerical_rank(shifted, self.tol, scale=base) == dim:
            return False
        power = matrix_power(shifted, multiplicity)
        return dim - numerical_rank(power, self.tol, scale=base ** multiplicity) == multiplicity

    def _widest_pole(self, a: np.ndarray, values: np.ndarray, groups: List[List[int]], seed: int) -> List[int]:
        """Largest set of groups around groups[seed] that behaves as one split pole"""
        center = np.mean(values[groups[seed]])
        nearest = sorted((k for k in range(len(groups)) if k != seed),
                         key=lambda k: abs(np.mean(values[groups[k]]) - center))
        limit = self.scatter_radius(a, a.shape[0])
        taken, members, best = [seed], list(groups[seed]), []
        for k in nearest:
            taken.append(k)
            members += groups[k]
            mu = complex(np.mean(values[members]))
            spread = float(np.max(np.abs(values[members] - mu)))
            if spread > limit:
                break
            if spread <= self.scatter_radius(a, len(members)) and self._is_single_pole(a, mu, len(members)):
                best = list(taken)
        return best

    def eigen_data(self, A) -> List[EigenCluster]:
        """
        Eigenvalues grouped into clusters.

        Two eigenvalues share a cluster when they are linked by a chain of
        eigenvalues at distance ≤ cluster_rel·‖A‖. Neighbouring clusters that
        lie within the rounding scatter of a k-fold pole are then merged when
        (A − μ)^k has nullity k. Each cluster is represented by its mean;
        clusters are sorted by real part, then imaginary part.
        """
        a = as_matrix(A, "A")
        try:
            values = sla.eigvals(a)
        except (sla.LinAlgError, ValueError) as e:
            raise NumericalError(f"Eigenvalue computation did not converge: {e}")

        radius = self.cluster_radius(a)
        adjacency = np.abs(values[:, None] - values[None, :]) <= radius
        count, labels = connected_components(csr_matrix(adjacency), directed=False)
        groups = [list(np.flatnonzero(labels == label)) for label in range(count)]

        merged = True
        while merged and len(groups) > 1:
            merged = False
            for seed in range(len(groups)):
                pole = self._widest_pole(a, values, groups, seed)
                if pole:
                    logger.debug("Merged %d clusters into one pole", len(pole))
                    joined = [index for k in pole for index in groups[k]]
                    groups = [g for k, g in enumerate(groups) if k not in pole] + [joined]
                    merged = True
                    break

        clusters = [EigenCluster(value=complex(np.mean(values[g])), algebraic_mult=len(g)) for g in groups]
        clusters.sort(key=lambda c: (c.value.real, c.value.imag))
        return clusters

    def eigenvalues(self, A) -> np.ndarray:
        return sla.eigvals(as_matrix(A, "A"))

    def locate(self, A: np.ndarray, lam: complex) -> EigenCluster:
        """The cluster containing λ, or a domain error"""
        clusters = self.eigen_data(A)
        distances = [abs(c.value - lam) for c in clusters]
        best = int(np.argmin(distances))
        spread = self.cluster_radius(A) if clusters[best].algebraic_mult == 1 else \
            self.scatter_radius(A, clusters[best].algebraic_mult)
        reach = max(spread, self.tol.abs_floor) + self.tol.zero_rel * max(1.0, abs(lam))
        if distances[best] > reach:
            raise DomainError(f"λ = {lam} is not an eigenvalue (nearest {clusters[best].value})")
        return clusters[best]

    @staticmethod
    def spectrum_distance(first: Sequence[complex], second: Sequence[complex]) -> float:
        """Largest distance under the optimal matching of two eigenvalue multisets"""
        a, b = np.asarray(first, dtype=complex), np.asarray(second, dtype=complex)
        if a.size != b.size:
            return float("inf")
        if a.size == 0:
            return 0.0
        cost = np.abs(a[:, None] - b[None, :])
        rows, cols = linear_sum_assignment(cost)
        return float(np.max(cost[rows, cols]))

    # Poles

    def _rank_sequence(self, shifted: np.ndarray) -> List[int]:
        dim = shifted.shape[0]
        base = max(op_norm(shifted), 1.0)
        ranks = []
        for k in range(dim + 2):
            ranks.append(numerical_rank(matrix_power(shifted, k), self.tol, scale=base ** k))
        return ranks

    def ascent_descent(self, A, lam: complex) -> AscentDescent:
        """Stabilization indices of ker((A−λ)ᵏ) and range((A−λ)ᵏ)"""
        a = as_matrix(A, "A")
        cluster = self.locate(a, lam)
        shifted = a - cluster.value * np.eye(a.shape[0])
        ranks = self._rank_sequence(shifted)
        nullities = [a.shape[0] - r for r in ranks]

        ascent = next(k for k in range(len(ranks) - 1) if nullities[k] == nullities[k + 1])
        descent = next(k for k in range(len(ranks) - 1) if ranks[k] == ranks[k + 1])
        if ascent == 0:
            raise DomainError(f"λ = {lam} is numerically not an eigenvalue")
        return AscentDescent(ascent=ascent, descent=descent, pole_order=ascent)

    def riesz_projection(self, A, lam: complex) -> RieszProjection:
        """Idempotent onto ker((A−λ)ᵏ) along range((A−λ)ᵏ), k the pole order"""
        a = as_matrix(A, "A")
        cluster = self.locate(a, lam)
        order = self.ascent_descent(a, cluster.value).pole_order
        shifted = a - cluster.value * np.eye(a.shape[0])
        power = matrix_power(shifted, order)
        scale = max(op_norm(shifted), 1.0) ** order

        _, range_basis, _ = rank_and_bases(power, self.tol, scale=scale)
        null_basis = kernel_basis(power, self.tol, scale=scale)
        basis = np.hstack([null_basis, range_basis])
        if basis.shape[1] != a.shape[0]:
            raise NumericalError("Kernel and range of the spectral power do not span the space")

        condition = float(np.linalg.cond(basis))
        selector = np.diag([1.0] * null_basis.shape[1] + [0.0] * range_basis.shape[1])
        projection = basis @ selector @ np.linalg.inv(basis)

        warning = None
        if condition > 1.0 / max(self.tol.zero_rel, np.finfo(float).eps):
            warning = f"Ill-conditioned spectral basis at λ={cluster.value} (condition {condition:.3e})"
            logger.warning(warning)
        return RieszProjection(matrix=projection, condition=condition, warning=warning)

    def is_hermitian(self, P: np.ndarray) -> bool:
        return self.tol.is_zero(frobenius(P - adjoint(P)), max(frobenius(P), 1.0))

    def spectral_report(self, A) -> SpectralReport:
        """Eigenvalues with multiplicities, pole orders, Riesz projections and flags"""
        a = as_matrix(A, "A")
        dim = a.shape[0]
        infos: List[EigenInfo] = []
        riesz: Dict[complex, np.ndarray] = {}
        flags: Dict[complex, ProjectionFlags] = {}
        warnings: List[str] = []

        for cluster in self.eigen_data(a):
            poles = self.ascent_descent(a, cluster.value)
            shifted = a - cluster.value * np.eye(dim)
            geometric = dim - numerical_rank(shifted, self.tol, scale=max(op_norm(shifted), 1.0))
            projection = self.riesz_projection(a, cluster.value)
            if projection.warning:
                warnings.append(projection.warning)

            rank_p = numerical_rank(projection.matrix, self.tol)
            if rank_p != cluster.algebraic_mult:
                message = (f"Riesz projection rank {rank_p} differs from algebraic multiplicity "
                           f"{cluster.algebraic_mult} at λ={cluster.value}")
                logger.warning(message)
                warnings.append(message)

            infos.append(EigenInfo(
                value=cluster.value,
                algebraic_mult=cluster.algebraic_mult,
                geometric_mult=geometric,
                ascent=poles.ascent,
                descent=poles.descent,
                pole_order=poles.pole_order,
            ))
            riesz[cluster.value] = projection.matrix
            flags[cluster.value] = ProjectionFlags(
                selfadjoint_projection=self.is_hermitian(projection.matrix),
                simple_pole=poles.pole_order == 1,
            )
        return SpectralReport(dim=dim, eigenvalues=infos, riesz=riesz, flags=flags, warnings=warnings)

    # Spectral checks

    def is_power_bounded(self, S) -> bool:
        """Spectrum in the closed unit disc and semisimple on the unit circle"""
        s = as_matrix(S, "S")
        margin = self.tol.cluster_rel
        for cluster in self.eigen_data(s):
            modulus = abs(cluster.value)
            if modulus > 1 + margin:
                return False
            if modulus >= 1 - margin and self.ascent_descent(s, cluster.value).ascent > 1:
                return False
        return True

    def _unimodular_semisimple(self, builder: CertificateBuilder, S: np.ndarray, prefix: str = "") -> None:
        dim = S.shape[0]
        rank = numerical_rank(S, self.tol)
        clusters = self.eigen_data(S)
        circle_defect = max(abs(abs(c.value) - 1.0) for c in clusters)
        orders = [self.ascent_descent(S, c.value).pole_order for c in clusters]
        builder.add_residual(f"{prefix}rank_deficiency", dim - rank, 1.0, threshold=0.0)
        builder.add_residual(f"{prefix}unit_circle_defect", circle_defect, 1.0, threshold=self.tol.cluster_rel)
        builder.add_residual(f"{prefix}pole_order_excess", max(orders) - 1, 1.0, threshold=0.0)

    def unimodular_semisimple_check(self, S, T, m: int) -> ConstructionCertificate:
        """
        A left m-invertible pair of power bounded operators: S must be
        invertible with unimodular spectrum and only simple poles.
        """
        try:
            s, t = as_matrix(S, "S"), as_matrix(T, "T")
            builder = CertificateBuilder(self.tol).set_name("unimodular-semisimple").set_metadata(m=m)

            # Step 1: hypotheses
            hypothesis = self.calculus.quasi_residual(OperatorPair(t, s, DKind.delta), m, 0)
            builder.add_hypothesis("left_m_inverse", hypothesis.norm, hypothesis.scale)
            if not self.is_power_bounded(s):
                builder.add_hypothesis_violation("S power bounded")
            if not self.is_power_bounded(t):
                builder.add_hypothesis_violation("T power bounded")

            # Step 2: conclusion
            self._unimodular_semisimple(builder, s)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error checking unimodular semisimplicity: {e}")

    def point_spectrum_circle_check(self, A, Q, m: int) -> ConstructionCertificate:
        """Δᵐ_{A*,A}(Q) = 0 with Q injective forces the point spectrum onto the unit circle"""
        a, q = as_matrix(A, "A"), as_matrix(Q, "Q")
        builder = CertificateBuilder(self.tol).set_name("point-spectrum-circle").set_metadata(m=m)

        hypothesis = self.calculus.closed_sum(OperatorPair(adjoint(a), a, DKind.delta), q, m)
        builder.add_hypothesis("weighted_m_isometry", hypothesis.norm, hypothesis.scale)

        hermitian_defect = frobenius(q - adjoint(q))
        builder.add_hypothesis("Q_hermitian", hermitian_defect, frobenius(q))
        weights = np.linalg.eigvalsh((q + adjoint(q)) / 2)
        largest = float(np.max(np.abs(weights)))
        if weights[0] < -self.tol.zero_threshold(largest):
            builder.add_hypothesis_violation("Q positive semidefinite", float(weights[0]))

        if weights[0] <= self.tol.zero_threshold(largest):
            builder.set_vacuous("Q is not injective; nothing is asserted about the point spectrum")
            return builder.build()

        circle_defect = max(abs(abs(lam) - 1.0) for lam in self.eigenvalues(a))
        builder.add_residual("unit_circle_defect", circle_defect, 1.0,
                             threshold=self.tol.zero_rel ** (1.0 / m) + self.tol.abs_floor)
        return builder.build()

    def real_spectrum_check(self, S, m: int) -> ConstructionCertificate:
        """δᵐ_{S*,S}(I) = 0 forces a real point spectrum"""
        s = as_matrix(S, "S")
        builder = CertificateBuilder(self.tol).set_name("real-spectrum").set_metadata(m=m)
        hypothesis = self.calculus.quasi_residual(OperatorPair.adjoint_of(s, DKind.small_delta), m, 0)
        builder.add_hypothesis("m_selfadjoint", hypothesis.norm, hypothesis.scale)

        imaginary = max(abs(lam.imag) for lam in self.eigenvalues(s))
        builder.add_residual("imaginary_part", imaginary, max(1.0, op_norm(s)),
                             threshold=self.tol.zero_rel ** (1.0 / m) * max(1.0, op_norm(s)))
        return builder.build()

    def check_psd(self, Q: np.ndarray) -> float:
        """Most negative eigenvalue of the Hermitian part (0 when PSD)"""
        weights = np.linalg.eigvalsh((Q + adjoint(Q)) / 2)
        if weights.size == 0:
            return 0.0
        if weights[0] < -self.tol.zero_threshold(float(np.max(np.abs(weights)))):
            logger.debug("Matrix has negative eigenvalue %.3e", weights[0])
        return float(max(0.0, -weights[0]))
