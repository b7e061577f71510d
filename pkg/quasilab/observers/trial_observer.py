from abc import ABC, abstractmethod
import logging
import math
from typing import Dict, List

from ..models.certificate import CertificateStatus
from ..models.trial import TrialOutcome
from ..schemas.suite_schema import CertificateCounts, SuiteSummary

logger = logging.getLogger(__name__)


class TrialObserver(ABC):
    """Abstract observer for trial events"""

    @abstractmethod
    def on_trial_completed(self, outcome: TrialOutcome) -> None:
        """Called once per finished trial"""
        pass


class SuiteTallyObserver(TrialObserver):
    """Accumulates outcome counts per suite"""

    def __init__(self):
        self._counts: Dict[str, Dict[CertificateStatus, int]] = {}
        self._worst: Dict[str, float] = {}
        self._exemplars: Dict[str, List[int]] = {}
        self._by_certificate: Dict[str, Dict[str, Dict[CertificateStatus, int]]] = {}

    def on_trial_completed(self, outcome: TrialOutcome) -> None:
        counts = self._counts.setdefault(outcome.suite, {status: 0 for status in CertificateStatus})
        counts[outcome.status] += 1
        # raised trials carry an infinite residual; they show up as failures instead
        if math.isfinite(outcome.worst_residual):
            self._worst[outcome.suite] = max(self._worst.get(outcome.suite, 0.0), outcome.worst_residual)
        if outcome.status is CertificateStatus.failed:
            self._exemplars.setdefault(outcome.suite, []).append(outcome.seed)
        by_name = self._by_certificate.setdefault(outcome.suite, {})
        for name, status in outcome.certificates:
            tally = by_name.setdefault(name, {s: 0 for s in CertificateStatus})
            tally[status] += 1

    def summaries(self) -> Dict[str, SuiteSummary]:
        summaries = {}
        for suite, counts in self._counts.items():
            summaries[suite] = SuiteSummary(
                trials=sum(counts.values()),
                passed=counts[CertificateStatus.passed],
                vacuous=counts[CertificateStatus.vacuous],
                failed=counts[CertificateStatus.failed],
                worst_residual=self._worst.get(suite, 0.0),
                exemplar_seeds=list(self._exemplars.get(suite, [])),
                certificates={
                    name: CertificateCounts(
                        passed=tally[CertificateStatus.passed],
                        vacuous=tally[CertificateStatus.vacuous],
                        failed=tally[CertificateStatus.failed],
                    )
                    for name, tally in sorted(self._by_certificate.get(suite, {}).items())
                },
            )
        return summaries


class LoggingObserver(TrialObserver):
    """Logs every trial at DEBUG and failures at WARNING"""

    def on_trial_completed(self, outcome: TrialOutcome) -> None:
        if outcome.status is CertificateStatus.failed:
            logger.warning("%s trial %d failed (seed %d, dim %d): %s",
                           outcome.suite, outcome.trial, outcome.seed, outcome.dim,
                           outcome.detail or f"worst residual {outcome.worst_residual:.3e}")
        else:
            logger.debug("%s trial %d %s", outcome.suite, outcome.trial, outcome.status.value)


class TrialEventManager:
    """Manages trial observers and triggers events"""

    def __init__(self):
        self._observers: List[TrialObserver] = []

    def add_observer(self, observer: TrialObserver) -> None:
        """Add an observer to receive trial events"""
        if observer not in self._observers:
            self._observers.append(observer)

    def remove_observer(self, observer: TrialObserver) -> None:
        if observer in self._observers:
            self._observers.remove(observer)

    def notify_trial_completed(self, outcome: TrialOutcome) -> None:
        """Notify all observers; a failing observer never stops the others"""
        for observer in self._observers:
            try:
                observer.on_trial_completed(outcome)
            except Exception as e:
                logger.error("Observer %s failed: %s", observer.__class__.__name__, e)
