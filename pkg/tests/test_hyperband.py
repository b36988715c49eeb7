import math

import pytest

from leafcast.errors import DataError, NumericError
from leafcast.tuning.hyperband import TrialOutcome, hyperband_schedule, run_hyperband
from leafcast.tuning.space import SearchSpace

from .conftest import separable_dataset, tiny_config


class StubTrainer:
    """Loss depends only on the trial id; state is the cumulative epoch count."""

    def __init__(self, loss, fail=()):
        self.loss = loss
        self.fail = set(fail)
        self.calls = []

    def __call__(self, trial, epochs, resume):
        self.calls.append((trial.trial_id, epochs, resume))
        if trial.trial_id in self.fail:
            raise NumericError("loss is nan")
        return TrialOutcome(val_loss=self.loss(trial.trial_id), state=(resume or 0) + epochs)


def _scramble(trial_id):
    return ((trial_id + 1) * 7919) % 97 / 97


def test_schedule_for_27_and_3():
    plans = hyperband_schedule(27, 3)
    assert [p.s for p in plans] == [3, 2, 1, 0]
    assert [p.rounds for p in plans] == [
        [(27, 1), (9, 3), (3, 9), (1, 27)],
        [(12, 3), (4, 9), (1, 27)],
        [(6, 9), (2, 27)],
        [(4, 27)],
    ]


def test_schedule_for_30_rounds_half_up():
    rungs = [[r for _, r in p.rounds] for p in hyperband_schedule(30, 3)]
    assert rungs[0] == [1, 3, 10, 30]
    assert rungs[-1] == [30]


def test_schedule_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hyperband_schedule(0, 3)
    with pytest.raises(ValueError):
        hyperband_schedule(27, 1)


def test_winner_is_the_lowest_final_loss():
    trainer = StubTrainer(_scramble)
    best, report = run_hyperband(SearchSpace(), None, None, R=27, eta=3, seed=1, trainer=trainer)

    assert report.trial_count == 27 + 12 + 6 + 4
    expected = min(range(report.trial_count), key=lambda k: (_scramble(k), k))
    assert best.trial_id == expected == report.best_trial_id
    assert report.best_val_loss == _scramble(expected)
    assert report.best_state == 27


def test_survivors_resume_and_only_train_extra_epochs():
    trainer = StubTrainer(_scramble)
    _, report = run_hyperband(SearchSpace(), None, None, R=27, eta=3, seed=1, trainer=trainer)

    assert report.epochs_trained == sum(p.epochs_with_resume for p in report.plans)
    for trial_id, epochs, resume in trainer.calls:
        assert (resume or 0) + epochs in (1, 3, 9, 27)


def test_ties_go_to_the_lower_trial_id():
    _, report = run_hyperband(SearchSpace(), None, None, R=27, eta=3, seed=1, trainer=StubTrainer(lambda k: 0.5))

    assert report.best_trial_id == 0
    first_round = [r for r in report.records if r.bracket == 3 and r.round == 0]
    kept = sorted(r.trial_id for r in first_round if not r.eliminated)
    assert kept == list(range(9))


def test_last_round_eliminates_nothing():
    _, report = run_hyperband(SearchSpace(), None, None, R=9, eta=3, seed=0, trainer=StubTrainer(_scramble))
    for plan in report.plans:
        last = [r for r in report.records if r.bracket == plan.s and r.round == len(plan.rounds) - 1]
        assert last and not any(r.eliminated for r in last)


def test_numeric_failure_counts_as_infinite_loss():
    trainer = StubTrainer(lambda k: 0.1 if k == 0 else 0.5, fail={0})
    _, report = run_hyperband(SearchSpace(), None, None, R=3, eta=3, seed=0, trainer=trainer)

    failed = [r for r in report.records if r.trial_id == 0]
    assert failed and all(math.isinf(r.val_loss) for r in failed)
    assert report.best_trial_id != 0


def test_same_seed_samples_the_same_configurations():
    first = run_hyperband(SearchSpace(), None, None, R=3, eta=3, seed=4, trainer=StubTrainer(_scramble))[1]
    second = run_hyperband(SearchSpace(), None, None, R=3, eta=3, seed=4, trainer=StubTrainer(_scramble))[1]
    assert [r.config_json for r in first.records] == [r.config_json for r in second.records]


def test_default_trainer_needs_validation_examples():
    data = separable_dataset()
    with pytest.raises(DataError):
        run_hyperband(SearchSpace(), data, data.subset(data.y & ~data.y), R=1, eta=3)


@pytest.mark.slow
def test_tunes_a_small_space_on_real_data():
    data = separable_dataset(n=30)
    space = SearchSpace(max_layers=1, units=(2, 3), learning_rates=(0.01,), dropout_rates=(0.0,))

    best, report = run_hyperband(
        space, data, data, R=3, eta=3, seed=2, base_config=tiny_config(batch_size=16)
    )

    assert space.contains(best.config)
    assert math.isfinite(report.best_val_loss)
    assert report.best_state.epochs_trained in (1, 3)
