"""
Elementary operators Δ_{T,S}(X) = TXS − X and δ_{T,S}(X) = TX − XS, their
powers, the conjugation action and the two binomial expansions.
"""
import logging
from math import comb
from typing import List, Optional

import numpy as np

from ..config.app_config import Config
from ..exceptions import DimensionError, DomainError
from ..models.certificate import HypothesisViolation
from ..models.conjugation import Conjugation
from ..models.operator_pair import DKind, OperatorPair
from ..models.residual import ExpansionResult, Residual
from ..config.tolerance import ToleranceConfig
from ..utils.linalg import (
    adjoint,
    as_matrix,
    commutator_defect,
    frobenius,
    matrix_power,
    require_same_shape,
)

logger = logging.getLogger(__name__)


def _powers(matrix: np.ndarray, top: int) -> List[np.ndarray]:
    """[I, M, M², ..., M^top]"""
    out = [np.eye(matrix.shape[0], dtype=np.complex128)]
    for _ in range(top):
        out.append(out[-1] @ matrix)
    return out


class CalculusService:
    """Service layer for the elementary-operator calculus"""

    def __init__(self, tol: Optional[ToleranceConfig] = None):
        self.tol = tol or ToleranceConfig()

    def _check_operand(self, pair: OperatorPair, X) -> np.ndarray:
        x = as_matrix(X, "X")
        if x.shape != pair.S.shape:
            raise DimensionError(f"X has shape {x.shape}, pair acts on dimension {pair.dim}")
        return x

    @staticmethod
    def _check_order(m: int) -> None:
        if m < 0:
            raise DomainError(f"Order must be nonnegative, got {m}")
        if m > Config.BINOMIAL_CAP:
            raise DomainError(f"Order {m} exceeds the exact binomial cap {Config.BINOMIAL_CAP}")

    def d_apply(self, pair: OperatorPair, X) -> np.ndarray:
        """One application of the elementary operator"""
        x = self._check_operand(pair, X)
        if pair.kind is DKind.delta:
            return pair.T @ x @ pair.S - x
        return pair.T @ x - x @ pair.S

    def d_power(self, pair: OperatorPair, X, m: int) -> np.ndarray:
        """m-fold recursive application; d⁰(X) = X"""
        if m < 0:
            raise DomainError(f"Order must be nonnegative, got {m}")
        result = self._check_operand(pair, X)
        for _ in range(m):
            result = self.d_apply(pair, result)
        return result

    def closed_sum(self, pair: OperatorPair, X, m: int, outer: Optional[np.ndarray] = None,
                   n: int = 0, propagated: bool = False) -> Residual:
        """
        Closed binomial form of dᵐ(X), optionally sandwiched as S*ⁿ·dᵐ(X)·Sⁿ with S = outer.

        The scale is the largest Frobenius norm among the (sandwiched) terms.
        With ``propagated`` it is the largest product of the factor norms of a
        term instead, which bounds the rounding error when the factors of a
        term cancel each other.
        """
        self._check_order(m)
        x = self._check_operand(pair, X)
        if m == 0:
            terms = [x]
            bounds = [frobenius(x)]
        else:
            t_powers = _powers(pair.T, m)
            s_powers = _powers(pair.S, m)
            terms, bounds = [], []
            for j in range(m + 1):
                coefficient = (-1) ** j * comb(m, j)
                right = s_powers[m - j] if pair.kind is DKind.delta else s_powers[j]
                terms.append(coefficient * (t_powers[m - j] @ x @ right))
                bounds.append(comb(m, j) * frobenius(t_powers[m - j]) * frobenius(x) * frobenius(right))

        if outer is not None and n > 0:
            outer = as_matrix(outer, "outer operator")
            require_same_shape(outer=outer, S=pair.S)
            right = matrix_power(outer, n)
            left = adjoint(right)
            terms = [left @ term @ right for term in terms]
            bounds = [bound * frobenius(right) ** 2 for bound in bounds]

        total = np.sum(terms, axis=0)
        scale = max(bounds) if propagated else max(frobenius(term) for term in terms)
        return Residual(matrix=total, scale=scale)

    def d_power_closed(self, pair: OperatorPair, X, m: int) -> np.ndarray:
        """Σⱼ (−1)ʲ C(m,j) T^{m−j} X S^{m−j} (Delta) or T^{m−j} X Sʲ (SmallDelta)"""
        return self.closed_sum(pair, X, m).matrix

    def cmc(self, C: Conjugation, M) -> np.ndarray:
        """Matrix of the linear map x ↦ C(M(C(x)))"""
        m = as_matrix(M, "M")
        if m.shape != C.J.shape:
            raise DimensionError(f"Conjugation acts on dimension {C.dim}, matrix has shape {m.shape}")
        return C.J @ np.conj(m) @ np.conj(C.J)

    def quasi_residual(self, pair: OperatorPair, m: int, n: int,
                       outer: Optional[np.ndarray] = None, propagated: bool = False) -> Residual:
        """
        S*ⁿ·dᵐ_{T,S}(I)·Sⁿ.

        ``outer`` defaults to pair.S; conjugated classes pass pair.S = cmc(C, S)
        together with the original S as ``outer``.
        """
        if m < 1:
            raise DomainError(f"Order must be positive, got {m}")
        if n < 0:
            raise DomainError(f"Quasi exponent must be nonnegative, got {n}")
        identity = np.eye(pair.dim, dtype=np.complex128)
        return self.closed_sum(pair, identity, m, outer=pair.S if outer is None else outer, n=n,
                               propagated=propagated)

    def conjugated_pair(self, S, C: Optional[Conjugation], kind: DKind,
                        T: Optional[np.ndarray] = None) -> OperatorPair:
        """(T, CSC) with T defaulting to S*; without C this is (T, S)"""
        s = as_matrix(S, "S")
        right = s if C is None else self.cmc(C, s)
        return OperatorPair(T=adjoint(s) if T is None else T, S=right, kind=kind)

    @staticmethod
    def adjoint_pair(pair: OperatorPair) -> OperatorPair:
        """(S*, T*): its d-powers at I are adjoints of those of (T, S) up to sign"""
        return OperatorPair(T=adjoint(pair.S), S=adjoint(pair.T), kind=pair.kind)

    @staticmethod
    def power_pair(pair: OperatorPair, p: int) -> OperatorPair:
        """(Tᵖ, Sᵖ)"""
        if p < 1:
            raise DomainError(f"Power must be positive, got {p}")
        return OperatorPair(T=matrix_power(pair.T, p), S=matrix_power(pair.S, p), kind=pair.kind)

    def _commutation_violations(self, named_pairs) -> List[HypothesisViolation]:
        violations = []
        for name, a, b in named_pairs:
            magnitude, vanishes = commutator_defect(a, b, self.tol)
            if not vanishes:
                violations.append(HypothesisViolation(name, magnitude))
        return violations

    def product_expansion(self, kind: DKind, T1, S1, T2, S2, p: int) -> ExpansionResult:
        """
        d^p_{T1T2,S1S2}(I) against its binomial expansion in d_{T1,S1} and d_{T2,S2}.

        The rearranged form is exact when the four operators commute pairwise;
        every commutator that does not vanish is reported.
        """
        if p < 1:
            raise DomainError(f"Order must be positive, got {p}")
        t1, s1, t2, s2 = (as_matrix(M, name) for M, name in ((T1, "T1"), (S1, "S1"), (T2, "T2"), (S2, "S2")))
        require_same_shape(T1=t1, S1=s1, T2=t2, S2=s2)
        identity = np.eye(s1.shape[0], dtype=np.complex128)

        violations = self._commutation_violations([
            ("[S1,S2]", s1, s2), ("[T1,T2]", t1, t2),
            ("[T1,S1]", t1, s1), ("[T2,S2]", t2, s2),
            ("[T1,S2]", t1, s2), ("[T2,S1]", t2, s1),
        ])

        lhs = self.closed_sum(OperatorPair(t1 @ t2, s1 @ s2, kind), identity, p)
        first = [self.closed_sum(OperatorPair(t1, s1, kind), identity, j) for j in range(p + 1)]
        second = [self.closed_sum(OperatorPair(t2, s2, kind), identity, j) for j in range(p + 1)]
        t1_powers, t2_powers, s1_powers = _powers(t1, p), _powers(t2, p), _powers(s1, p)

        rhs = np.zeros_like(identity)
        rhs_scale = 0.0
        for j in range(p + 1):
            c = comb(p, j)
            if kind is DKind.delta:
                outer_left, inner, outer_right, tail = t1_powers[p - j], second[p - j], s1_powers[p - j], first[j]
                rhs = rhs + c * outer_left @ inner.matrix @ outer_right @ tail.matrix
            else:
                outer_left, inner, tail, outer_right = t2_powers[p - j], first[p - j], second[j], s1_powers[j]
                rhs = rhs + c * outer_left @ inner.matrix @ tail.matrix @ outer_right
            rhs_scale = max(rhs_scale, c * frobenius(outer_left) * inner.scale * frobenius(outer_right) * tail.scale)

        scale = max(lhs.scale, rhs_scale)
        difference = frobenius(lhs.matrix - rhs)
        if violations:
            logger.info("Product expansion evaluated with %d commutation defects", len(violations))
        return ExpansionResult(
            lhs=lhs.matrix,
            rhs=rhs,
            residual=difference / scale if scale > 0 else difference,
            scale=scale,
            hypothesis_violations=tuple(violations),
        )

    def perturbation_expansion(self, kind: DKind, T, S, N, p: int) -> ExpansionResult:
        """d^p_{T,S+N}(I) against Σⱼ C(p,j)·Tʲ·Δ^{p−j}_{T,S}(I)·Nʲ (or Σⱼ (−1)ʲ C(p,j)·δ^{p−j}_{T,S}(I)·Nʲ)"""
        if p < 1:
            raise DomainError(f"Order must be positive, got {p}")
        t, s, nil = as_matrix(T, "T"), as_matrix(S, "S"), as_matrix(N, "N")
        require_same_shape(T=t, S=s, N=nil)
        identity = np.eye(s.shape[0], dtype=np.complex128)

        violations = self._commutation_violations([("[S,N]", s, nil)])

        lhs = self.closed_sum(OperatorPair(t, s + nil, kind), identity, p)
        t_powers, n_powers = _powers(t, p), _powers(nil, p)
        base = OperatorPair(t, s, kind)

        rhs = np.zeros_like(identity)
        rhs_scale = 0.0
        for j in range(p + 1):
            inner = self.closed_sum(base, identity, p - j)
            if kind is DKind.delta:
                term = comb(p, j) * t_powers[j] @ inner.matrix @ n_powers[j]
                bound = comb(p, j) * frobenius(t_powers[j]) * inner.scale * frobenius(n_powers[j])
            else:
                term = (-1) ** j * comb(p, j) * inner.matrix @ n_powers[j]
                bound = comb(p, j) * inner.scale * frobenius(n_powers[j])
            rhs = rhs + term
            rhs_scale = max(rhs_scale, bound)

        scale = max(lhs.scale, rhs_scale)
        difference = frobenius(lhs.matrix - rhs)
        return ExpansionResult(
            lhs=lhs.matrix,
            rhs=rhs,
            residual=difference / scale if scale > 0 else difference,
            scale=scale,
            hypothesis_violations=tuple(violations),
        )
