import json

from pydantic import ValidationError
import pytest

from quasilab.facades.verification_facade import VerificationFacade
from quasilab.models.certificate import CertificateStatus
from quasilab.models.trial import TrialOutcome
from quasilab.observers.trial_observer import SuiteTallyObserver, TrialEventManager, TrialObserver
from quasilab.repositories.report_repository import ReportRepository
from quasilab.schemas.suite_schema import SuiteConfig, SuiteName, SuiteSummary
from quasilab.utils.file_storage import LocalFileStorage
from quasilab.utils.trial_strategies import TrialRunner


class RecordingObserver(TrialObserver):
    def __init__(self):
        self.outcomes = []

    def on_trial_completed(self, outcome):
        self.outcomes.append(outcome)


class BrokenObserver(TrialObserver):
    def on_trial_completed(self, outcome):
        raise RuntimeError("observer down")


def _outcome(status, trial=0, residual=0.0):
    return TrialOutcome(suite="calculus", trial=trial, seed=100 + trial, dim=2, status=status,
                        worst_residual=residual)


@pytest.fixture
def facade():
    return VerificationFacade()


def test_single_calculus_trial(facade):
    report = facade.run_suite(SuiteConfig(suites=["calculus"], trials=1, dims=(2, 2), seed=0),
                              write_report=False)
    assert report.overall
    assert report.suites["calculus"].trials == 1
    assert report.suites["calculus"].passed == 1
    assert report.config["dims"] == [2, 2]


@pytest.mark.parametrize("suite", [s.value for s in SuiteName.concrete()])
def test_every_suite_passes_a_few_trials(facade, suite):
    report = facade.run_suite(SuiteConfig(suites=[suite], trials=3, dims=(2, 4), seed=42), write_report=False)
    summary = report.suites[suite]
    assert summary.failed == 0, summary.exemplar_seeds
    assert summary.trials == 3


def test_runs_are_deterministic(facade):
    config = SuiteConfig(suites=["products", "classes"], trials=4, dims=(2, 4), seed=7)
    first = facade.run_suite(config, write_report=False)
    second = facade.run_suite(config, write_report=False)
    assert first.model_dump() == second.model_dump()


def test_parallel_run_matches_sequential(facade):
    sequential = SuiteConfig(suites=["calculus", "left-inverse"], trials=6, dims=(2, 4), seed=3)
    parallel = sequential.model_copy(update={"workers": 2})
    assert facade.run_suite(sequential, write_report=False).model_dump() == \
        facade.run_suite(parallel, write_report=False).model_dump()


def test_sabotaged_perturbations_are_vacuous(facade):
    config = SuiteConfig(suites=["perturbation"], trials=10, dims=(3, 4), seed=11, sabotage=True)
    summary = facade.run_suite(config, write_report=False).suites["perturbation"]
    assert summary.vacuous == 10
    assert summary.failed == 0


def test_all_expands_to_every_suite():
    config = SuiteConfig()
    assert config.expanded_suites() == SuiteName.concrete()
    assert SuiteConfig(suites=["riesz", "calculus"]).expanded_suites() == [SuiteName.calculus, SuiteName.riesz]


@pytest.mark.parametrize("update", [
    {"dims": (0, 3)},
    {"dims": (4, 2)},
    {"trials": 0},
    {"workers": 0},
    {"suites": []},
    {"suites": ["nonsense"]},
])
def test_config_validation(update):
    fields = {"suites": ["calculus"], **update}
    with pytest.raises(ValidationError):
        SuiteConfig(**fields)


def test_summary_counts_must_add_up():
    with pytest.raises(ValidationError):
        SuiteSummary(trials=3, passed=1, failed=1)


def test_tally_observer():
    tally = SuiteTallyObserver()
    tally.on_trial_completed(_outcome(CertificateStatus.passed, 0, 1e-12))
    tally.on_trial_completed(_outcome(CertificateStatus.failed, 1, float("inf")))
    tally.on_trial_completed(_outcome(CertificateStatus.vacuous, 2, 1e-3))
    summary = tally.summaries()["calculus"]
    assert (summary.passed, summary.vacuous, summary.failed) == (1, 1, 1)
    assert summary.worst_residual == 1e-3
    assert summary.exemplar_seeds == [101]


def test_event_manager_survives_failing_observer():
    recorder = RecordingObserver()
    events = TrialEventManager()
    events.add_observer(BrokenObserver())
    events.add_observer(recorder)
    events.add_observer(recorder)
    events.notify_trial_completed(_outcome(CertificateStatus.passed))
    assert len(recorder.outcomes) == 1
    events.remove_observer(recorder)
    events.notify_trial_completed(_outcome(CertificateStatus.passed))
    assert len(recorder.outcomes) == 1


def test_extra_observers_see_trials_in_order():
    recorder = RecordingObserver()
    config = SuiteConfig(suites=["calculus"], trials=5, dims=(2, 3), workers=3)
    VerificationFacade(observers=[recorder]).run_suite(config, write_report=False)
    assert [o.trial for o in recorder.outcomes] == list(range(5))


def test_report_is_written(tmp_path):
    repository = ReportRepository(file_storage=LocalFileStorage(tmp_path))
    config = SuiteConfig(suites=["calculus"], trials=2, dims=(2, 2), report_path="report.json")
    VerificationFacade(report_repo=repository).run_suite(config)
    document = json.loads((tmp_path / "report.json").read_text())
    assert document["overall"] is True
    assert document["suites"]["calculus"]["trials"] == 2
    assert "workers" not in document["config"]
    assert repository.load_report("report.json").suites["calculus"].passed == 2


def test_unknown_suite():
    with pytest.raises(ValueError):
        TrialRunner.create_with_suite("astrology")
    assert "riesz" in TrialRunner.available_suites()


def test_runner_outcome_fields():
    runner = TrialRunner.create_with_suite("calculus")
    outcome = runner.run(5, 2, (3, 3))
    assert outcome.suite == "calculus"
    assert outcome.dim == 3
    assert outcome.status is CertificateStatus.passed
    assert outcome.certificates


def test_products_count_every_wrapper(facade):
    report = facade.run_suite(SuiteConfig(suites=["products"], trials=4, dims=(2, 3), seed=42),
                              write_report=False)
    counts = report.suites["products"].certificates
    assert sorted(counts) == ["product", "product-conjugated", "product-isometric",
                              "product-selfadjoint", "product-tensor"]
    assert all(c.total == 4 for c in counts.values())
    assert all(c.failed == 0 for c in counts.values())


def test_calculus_trial_checks_expansions():
    outcome = TrialRunner.create_with_suite("calculus").run(11, 0, (3, 3))
    assert [name for name, _ in outcome.certificates] == ["calculus", "expansions"]
    assert outcome.status is CertificateStatus.passed


def test_tally_observer_counts_certificates():
    tally = SuiteTallyObserver()
    for trial, status in enumerate([CertificateStatus.passed, CertificateStatus.vacuous]):
        outcome = TrialOutcome(suite="calculus", trial=trial, seed=100 + trial, dim=2, status=status,
                               worst_residual=0.0,
                               certificates=(("calculus", CertificateStatus.passed), ("expansions", status)))
        tally.on_trial_completed(outcome)
    counts = tally.summaries()["calculus"].certificates
    assert (counts["calculus"].passed, counts["calculus"].total) == (2, 2)
    assert (counts["expansions"].passed, counts["expansions"].vacuous) == (1, 1)


@pytest.mark.slow
def test_all_suites_pass_at_seed_42(tmp_path):
    repository = ReportRepository(file_storage=LocalFileStorage(tmp_path))
    config = SuiteConfig(suites=["all"], seed=42, workers=4, report_path="report.json")
    report = VerificationFacade(report_repo=repository).run_suite(config)
    failing = {name: s.exemplar_seeds for name, s in report.suites.items() if s.failed}
    assert report.overall, failing
