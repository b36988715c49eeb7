"""
Report Data Generator

Transforms evaluation results into presentation-ready rows. This is the
glue between the domain metrics and the Excel presenter.

Responsibilities:
- Round scores for display (full precision stays in the CSV exports)
- Pair predicted and actual periods per tree and year
- Derive a status line from the leaf-fall F1 score
"""

from dataclasses import dataclass, field
from datetime import date
from typing import Any, Dict, List, Optional, Sequence

from ..domain.evaluation import AGGREGATE_TREE
from ..domain.models import ClassificationReport, PeriodSummary, RmseReport

DISPLAY_DECIMALS = 2


@dataclass
class EvaluationResult:
    """Everything the evaluate command computed."""
    classification: ClassificationReport
    predicted_periods: List[PeriodSummary]
    actual_periods: List[PeriodSummary]
    rmse: Dict[str, RmseReport]
    metrics: Sequence = field(default_factory=list)
    holdout_tree: str = ""
    model_description: str = ""
    config_hash: str = ""
    threshold: float = 0.5
    warnings: List[str] = field(default_factory=list)


class ReportDataGenerator:
    """
    Generates presentation-ready data from evaluation results.

    Separates metric computation (domain.evaluation) from presentation
    (ExcelPresenter).
    """

    def generate_report_data(self, result: EvaluationResult) -> Dict[str, Any]:
        """
        Generate the complete report data structure.

        Returns:
            Dictionary with one entry per workbook sheet
        """
        return {
            'summary': self._generate_summary_data(result),
            'classification': self._generate_classification_data(result.classification),
            'periods': self._generate_periods_data(result.predicted_periods, result.actual_periods),
            'rmse': self._generate_rmse_data(result.rmse),
            'learning_curves': self._generate_learning_curve_data(result.metrics),
        }

    def _generate_summary_data(self, result: EvaluationResult) -> Dict:
        report = result.classification
        f1 = report.leaf_fall.f1

        if f1 >= 0.85:
            status_text = "GOOD - Leaf-fall days detected reliably"
        elif f1 >= 0.6:
            status_text = "FAIR - Review period boundaries"
        else:
            status_text = "ATTENTION REQUIRED - Weak leaf-fall detection"

        rmse_rows = [
            (scope, self._round(r.rmse_start), self._round(r.rmse_end), self._round(r.rmse_overall))
            for scope, r in result.rmse.items()
        ]

        return {
            'holdout_tree': result.holdout_tree,
            'model': result.model_description,
            'config_hash': result.config_hash,
            'threshold': result.threshold,
            'examples': report.total,
            'accuracy': self._round(report.accuracy),
            'leaf_fall_f1': self._round(f1),
            'leaf_fall_precision': self._round(report.leaf_fall.precision),
            'leaf_fall_recall': self._round(report.leaf_fall.recall),
            'rmse_rows': rmse_rows,
            'epochs': len(result.metrics),
            'status_score': f1,
            'status_text': status_text,
            'warnings': list(result.warnings),
        }

    def _generate_classification_data(self, report: ClassificationReport) -> List[Dict]:
        rows = []
        for name, scores in (
            ('Leaf-fall', report.leaf_fall),
            ('No leaf-fall', report.no_leaf_fall),
        ):
            rows.append({
                'label': name,
                'precision': self._round(scores.precision),
                'recall': self._round(scores.recall),
                'f1': self._round(scores.f1),
                'support': scores.support,
            })
        rows.append({
            'label': 'Accuracy',
            'precision': None,
            'recall': None,
            'f1': self._round(report.accuracy),
            'support': report.total,
        })
        for name, scores in (('Macro avg', report.macro_avg), ('Weighted avg', report.weighted_avg)):
            rows.append({
                'label': name,
                'precision': self._round(scores.precision),
                'recall': self._round(scores.recall),
                'f1': self._round(scores.f1),
                'support': scores.support,
            })
        return rows

    def _generate_periods_data(
        self,
        predicted: Sequence[PeriodSummary],
        actual: Sequence[PeriodSummary]
    ) -> List[Dict]:
        predicted_by_key = {(p.tree_id, p.year): p for p in predicted}
        actual_by_key = {(a.tree_id, a.year): a for a in actual}
        keys = sorted(
            set(predicted_by_key) | set(actual_by_key),
            key=lambda k: (k[0] == AGGREGATE_TREE, k[0], k[1])
        )

        rows = []
        for key in keys:
            p = predicted_by_key.get(key)
            a = actual_by_key.get(key)
            if p and a:
                status = 'BOTH'
            elif p:
                status = 'PREDICTED ONLY'
            else:
                status = 'ACTUAL ONLY'
            rows.append({
                'tree_id': key[0],
                'year': key[1],
                'pred_start': self._date(p.start_date if p else None),
                'pred_end': self._date(p.end_date if p else None),
                'actual_start': self._date(a.start_date if a else None),
                'actual_end': self._date(a.end_date if a else None),
                'start_diff': abs((p.start_date - a.start_date).days) if p and a else None,
                'end_diff': abs((p.end_date - a.end_date).days) if p and a else None,
                'status': status,
            })
        return rows

    def _generate_rmse_data(self, reports: Dict[str, RmseReport]) -> List[Dict]:
        rows = []
        for scope, report in reports.items():
            for start, end in zip(report.start, report.end):
                rows.append({
                    'scope': scope,
                    'tree_id': start.tree_id,
                    'year': start.year,
                    'start_diff': start.difference_days,
                    'end_diff': end.difference_days,
                })
            rows.append({
                'scope': scope,
                'tree_id': 'RMSE',
                'year': None,
                'start_diff': self._round(report.rmse_start),
                'end_diff': self._round(report.rmse_end),
                'overall': self._round(report.rmse_overall),
            })
        return rows

    def _generate_learning_curve_data(self, metrics: Sequence) -> List[Dict]:
        return [
            {
                'epoch': m.epoch,
                'train_loss': m.train_loss,
                'train_acc': m.train_acc,
                'val_loss': self._optional(m.val_loss),
                'val_acc': self._optional(m.val_acc),
            }
            for m in metrics
        ]

    @staticmethod
    def _round(value: float) -> float:
        return round(float(value), DISPLAY_DECIMALS)

    @staticmethod
    def _optional(value: float) -> Optional[float]:
        # NaN cells break openpyxl number formats
        return None if value != value else float(value)

    @staticmethod
    def _date(value: Optional[date]) -> str:
        return value.isoformat() if value else ''
