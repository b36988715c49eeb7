"""
Hyperband Tuner

Brackets of successive halving over sampled model configurations.
Survivors of a round resume from their previous state and train only
the extra epochs of the next rung.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..domain.models import WindowedDataset
from ..errors import DataError, NumericError
from ..model.config import ModelConfig
from ..model.trainer import TrainingResult, fit
from .space import SearchSpace, TrialConfig, sample_config

logger = logging.getLogger(__name__)

DEFAULT_R = 30
DEFAULT_ETA = 3


@dataclass(frozen=True)
class BracketPlan:
    """
    One successive-halving bracket.

    rounds holds (n_i, r_i): configurations trained in round i and the
    cumulative epochs each has after that round.
    """
    s: int
    rounds: List[Tuple[int, int]]

    @property
    def budget(self) -> int:
        """Sum of n_i * r_i (epochs without resume credit)."""
        return sum(n * r for n, r in self.rounds)

    @property
    def epochs_with_resume(self) -> int:
        """Epochs actually trained when survivors resume."""
        total = 0
        previous = 0
        for n, r in self.rounds:
            total += n * (r - previous)
            previous = r
        return total


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def hyperband_schedule(R: int, eta: int) -> List[BracketPlan]:
    """
    Bracket ladders for max resource R and downsampling rate eta.

    s_max = floor(log_eta R), B = (s_max + 1) R; bracket s starts with
    n = ceil(B eta^s / (R (s + 1))) configs at r = R eta^-s epochs and
    round i trains n // eta^i configs for round(r eta^i) epochs.
    """
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    if eta < 2:
        raise ValueError(f"eta must be at least 2, got {eta}")

    # integer log avoids float error at exact powers
    s_max = 0
    while eta ** (s_max + 1) <= R:
        s_max += 1

    plans = []
    for s in range(s_max, -1, -1):
        n = -(-(s_max + 1) * eta ** s // (s + 1))
        rounds = [
            (n // eta ** i, max(1, _round_half_up(R * float(eta) ** (i - s))))
            for i in range(s + 1)
        ]
        plans.append(BracketPlan(s=s, rounds=rounds))
    return plans


@dataclass
class TrialOutcome:
    """Result of training one trial for one rung."""
    val_loss: float
    state: Any = None
    aborted: bool = False


@dataclass(frozen=True)
class TrialRecord:
    """One row of the tune report: a trial's state after a round."""
    trial_id: int
    bracket: int
    round: int
    epochs: int
    config_json: str
    val_loss: float
    eliminated: bool


@dataclass
class TuneReport:
    """Every trial's progress plus the winner."""
    records: List[TrialRecord] = field(default_factory=list)
    plans: List[BracketPlan] = field(default_factory=list)
    best_trial_id: Optional[int] = None
    best_val_loss: float = math.inf
    best_state: Any = None
    epochs_trained: int = 0

    @property
    def trial_count(self) -> int:
        return len({r.trial_id for r in self.records})


TrialTrainer = Callable[[TrialConfig, int, Any], TrialOutcome]


class DatasetTrialTrainer:
    """Trains trials on fixed training and validation sets."""

    def __init__(self, train_set: WindowedDataset, val_set: WindowedDataset):
        self.train_set = train_set
        self.val_set = val_set

    def __call__(self, trial: TrialConfig, epochs: int, resume: Optional[TrainingResult]) -> TrialOutcome:
        result = fit(self.train_set, self.val_set, trial.config, resume=resume, epochs=epochs)
        return TrialOutcome(val_loss=result.final_val_loss, state=result)


def _run_trial(trainer: TrialTrainer, trial: TrialConfig, epochs: int, resume: Any) -> TrialOutcome:
    try:
        outcome = trainer(trial, epochs, resume)
    except NumericError as exc:
        logger.warning(f"  Trial {trial.trial_id} aborted: {exc}")
        return TrialOutcome(val_loss=math.inf, state=None, aborted=True)

    loss = outcome.val_loss
    if loss is None or not math.isfinite(loss):
        outcome.val_loss = math.inf
    return outcome


def _train_round(
    trainer: TrialTrainer,
    trials: List[TrialConfig],
    epochs: List[int],
    resumes: List[Any],
    jobs: int
) -> List[TrialOutcome]:
    """Train one round; results come back in trial order."""
    if jobs <= 1 or len(trials) <= 1:
        return [_run_trial(trainer, t, e, r) for t, e, r in zip(trials, epochs, resumes)]

    with ProcessPoolExecutor(max_workers=min(jobs, len(trials))) as executor:
        return list(executor.map(_run_trial, [trainer] * len(trials), trials, epochs, resumes))


def run_hyperband(
    space: SearchSpace,
    train_set: Optional[WindowedDataset],
    val_set: Optional[WindowedDataset],
    R: int = DEFAULT_R,
    eta: int = DEFAULT_ETA,
    seed: int = 7,
    base_config: Optional[ModelConfig] = None,
    trainer: Optional[TrialTrainer] = None,
    jobs: int = 1
) -> Tuple[TrialConfig, TuneReport]:
    """
    Search the space with Hyperband and return the best configuration.

    Each round ranks trials by validation loss (ties go to the lower
    trial id) and keeps the top floor(n_i / eta); the last round of a
    bracket eliminates nothing. The winner has the lowest final
    validation loss over all trials. Aborted trials count as infinite
    loss.

    Args:
        space: Search space to sample from
        train_set: Training examples (unused with a custom trainer)
        val_set: Validation examples (unused with a custom trainer)
        R: Maximum epochs per configuration
        eta: Downsampling rate
        seed: Seed of the configuration sampler
        base_config: Fixed settings (window, batch size, threshold)
        trainer: Callable (trial, extra_epochs, resume_state) -> TrialOutcome
        jobs: Trials trained concurrently within a round

    Raises:
        DataError: empty training or validation set with the default trainer
    """
    if trainer is None:
        if train_set is None or len(train_set) == 0:
            raise DataError("tuning needs a non-empty training set")
        if val_set is None or len(val_set) == 0:
            raise DataError("tuning needs a non-empty validation set")
        trainer = DatasetTrialTrainer(train_set, val_set)

    rng = np.random.default_rng(seed)
    plans = hyperband_schedule(R, eta)
    report = TuneReport(plans=plans)
    final_losses: Dict[int, float] = {}
    final_states: Dict[int, Any] = {}
    trials_by_id: Dict[int, TrialConfig] = {}
    next_id = 0

    logger.info("=" * 80)
    logger.info(f"HYPERBAND: R={R}, eta={eta}, {len(plans)} bracket(s), seed={seed}")
    logger.info("=" * 80)

    for plan in plans:
        n0 = plan.rounds[0][0]
        trials = []
        for _ in range(n0):
            trial = sample_config(space, rng, base=base_config, trial_id=next_id)
            trials.append(trial)
            trials_by_id[next_id] = trial
            next_id += 1

        logger.info(f"\nBracket s={plan.s}: {n0} config(s), rungs {[r for _, r in plan.rounds]}")
        states: Dict[int, Any] = {t.trial_id: None for t in trials}
        done_epochs: Dict[int, int] = {t.trial_id: 0 for t in trials}

        for i, (n_i, r_i) in enumerate(plan.rounds):
            extra = [r_i - done_epochs[t.trial_id] for t in trials]
            outcomes = _train_round(
                trainer, trials, extra, [states[t.trial_id] for t in trials], jobs
            )
            report.epochs_trained += sum(extra)

            losses = {}
            for trial, outcome in zip(trials, outcomes):
                states[trial.trial_id] = outcome.state
                done_epochs[trial.trial_id] = r_i
                losses[trial.trial_id] = outcome.val_loss

            last_round = i == len(plan.rounds) - 1
            ranked = sorted(trials, key=lambda t: (losses[t.trial_id], t.trial_id))
            keep = ranked if last_round else ranked[:n_i // eta]
            kept_ids = {t.trial_id for t in keep}

            for trial in trials:
                report.records.append(TrialRecord(
                    trial_id=trial.trial_id,
                    bracket=plan.s,
                    round=i,
                    epochs=r_i,
                    config_json=trial.to_json(),
                    val_loss=losses[trial.trial_id],
                    eliminated=trial.trial_id not in kept_ids
                ))
                final_losses[trial.trial_id] = losses[trial.trial_id]
                final_states[trial.trial_id] = states[trial.trial_id]

            best_here = ranked[0]
            logger.info(
                f"  Round {i}: {len(trials)} trial(s) x {r_i} epoch(s), "
                f"best trial {best_here.trial_id} val_loss={losses[best_here.trial_id]:.4f}, "
                f"kept {len(keep)}"
            )
            trials = [t for t in trials if t.trial_id in kept_ids]

    best_id = min(final_losses, key=lambda k: (final_losses[k], k))
    report.best_trial_id = best_id
    report.best_val_loss = final_losses[best_id]
    report.best_state = final_states[best_id]

    logger.info(f"\n[SUCCESS] Best trial {best_id}: {trials_by_id[best_id].config.describe()} "
                f"val_loss={report.best_val_loss:.4f} ({report.epochs_trained} epochs trained)")
    return trials_by_id[best_id], report
