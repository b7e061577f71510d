from concurrent.futures import ThreadPoolExecutor
import logging
from typing import List, Optional

from ..models.trial import TrialOutcome
from ..observers.trial_observer import LoggingObserver, SuiteTallyObserver, TrialEventManager, TrialObserver
from ..repositories.report_repository import ReportRepository
from ..schemas.suite_schema import SuiteConfig, SuiteReport
from ..utils.trial_strategies import TrialRunner

logger = logging.getLogger(__name__)


class VerificationFacade:
    """
    Simple facade to coordinate a batch verification run.

    The facade only handles coordination: trials are run by the suite
    strategies, counted by observers and written by the report repository.
    """

    def __init__(self, report_repo: Optional[ReportRepository] = None,
                 observers: Optional[List[TrialObserver]] = None):
        self.report_repo = report_repo or ReportRepository()
        self.extra_observers = list(observers or [])

    @staticmethod
    def _run_trials(runner: TrialRunner, config: SuiteConfig) -> List[TrialOutcome]:
        def run(trial: int) -> TrialOutcome:
            return runner.run(config.seed, trial, config.dims)

        if config.workers == 1:
            return [run(trial) for trial in range(config.trials)]
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(run, range(config.trials)))

    def run_suite(self, config: SuiteConfig, write_report: bool = True) -> SuiteReport:
        """
        Run every selected suite and emit the report.

        Steps:
        1. Build the strategy of each suite
        2. Run its trials, possibly in parallel
        3. Feed the outcomes to the observers in trial order
        4. Assemble and write the report
        """
        tally = SuiteTallyObserver()
        events = TrialEventManager()
        for observer in [tally, LoggingObserver(), *self.extra_observers]:
            events.add_observer(observer)

        for suite in config.expanded_suites():
            runner = TrialRunner.create_with_suite(suite.value, config.tol, config.sabotage)
            outcomes = self._run_trials(runner, config)
            for outcome in sorted(outcomes, key=lambda o: o.trial):
                events.notify_trial_completed(outcome)
            summary = tally.summaries()[suite.value]
            logger.info("Suite %s: %d passed, %d vacuous, %d failed (worst residual %.3e)",
                        suite.value, summary.passed, summary.vacuous, summary.failed, summary.worst_residual)

        report = SuiteReport.from_summaries(config, tally.summaries())
        if write_report:
            self.report_repo.save_report(report, config.report_path)
        return report
