"""
Excel Report Presentation

Pure presentation layer - handles only Excel formatting and styling.
No business logic, no calculations - receives formatted data and presents it.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side


class ExcelStyles:
    """
    Centralized Excel styling definitions.

    All visual styling in one place for easy maintenance.
    """

    # Colors (hex codes)
    COLOR_HEADER_BG = "366092"
    COLOR_HEADER_TEXT = "FFFFFF"
    COLOR_GOOD = "C6EFCE"       # Light green
    COLOR_BAD = "FFC7CE"        # Light red
    COLOR_PARTIAL = "FFEB9C"    # Light yellow
    COLOR_STATUS_GOOD = "006100"
    COLOR_STATUS_WARN = "9C5700"
    COLOR_STATUS_BAD = "9C0006"

    # Fonts
    FONT_TITLE = Font(size=16, bold=True, color=COLOR_HEADER_BG)
    FONT_HEADER = Font(color=COLOR_HEADER_TEXT, bold=True, size=11)
    FONT_SECTION = Font(size=12, bold=True)

    # Fills
    FILL_HEADER = PatternFill(start_color=COLOR_HEADER_BG, end_color=COLOR_HEADER_BG, fill_type="solid")
    FILL_GOOD = PatternFill(start_color=COLOR_GOOD, end_color=COLOR_GOOD, fill_type="solid")
    FILL_BAD = PatternFill(start_color=COLOR_BAD, end_color=COLOR_BAD, fill_type="solid")
    FILL_PARTIAL = PatternFill(start_color=COLOR_PARTIAL, end_color=COLOR_PARTIAL, fill_type="solid")

    # Borders
    BORDER_THIN = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    # Alignment
    ALIGN_CENTER = Alignment(horizontal='center')

    # Number formats
    FORMAT_SCORE = '0.00'
    FORMAT_LOSS = '0.0000'
    FORMAT_DAYS = '0'


class ExcelWorkbookBuilder:
    """
    Builds Excel workbooks using Fluent API pattern.

    Separates structure creation from styling.
    """

    def __init__(self):
        self.wb = Workbook()
        if 'Sheet' in self.wb.sheetnames:
            self.wb.remove(self.wb['Sheet'])

    def create_sheet(self, title: str, position: Optional[int] = None) -> 'SheetBuilder':
        """
        Create a new sheet in the workbook.

        Args:
            title: Sheet title
            position: Optional position (0-based index)

        Returns:
            SheetBuilder for method chaining
        """
        if position is not None:
            ws = self.wb.create_sheet(title, position)
        else:
            ws = self.wb.create_sheet(title)

        return SheetBuilder(ws)

    def save(self, path: Path):
        """Save workbook to file."""
        self.wb.save(path)


class SheetBuilder:
    """Fluent builder for worksheet content and styling."""

    def __init__(self, worksheet):
        self.ws = worksheet

    def set_title(self, row: int, col: int, title: str, merge_to_col: Optional[int] = None) -> 'SheetBuilder':
        cell = self.ws.cell(row=row, column=col, value=title)
        cell.font = ExcelStyles.FONT_TITLE

        if merge_to_col:
            self.ws.merge_cells(
                start_row=row, start_column=col,
                end_row=row, end_column=merge_to_col
            )

        return self

    def set_header_row(self, row: int, headers: List[str]) -> 'SheetBuilder':
        for col_idx, header in enumerate(headers, 1):
            cell = self.ws.cell(row=row, column=col_idx, value=header)
            cell.fill = ExcelStyles.FILL_HEADER
            cell.font = ExcelStyles.FONT_HEADER
            cell.border = ExcelStyles.BORDER_THIN
            cell.alignment = ExcelStyles.ALIGN_CENTER

        return self

    def set_data_row(
        self,
        row: int,
        data: List[Any],
        fill: Optional[PatternFill] = None,
        formats: Optional[Dict[int, str]] = None
    ) -> 'SheetBuilder':
        """
        Add data row with optional styling.

        Args:
            row: Row number
            data: List of cell values
            fill: Optional fill color
            formats: Optional dict of {column_index: number_format}
        """
        for col_idx, value in enumerate(data, 1):
            cell = self.ws.cell(row=row, column=col_idx, value=value)
            cell.border = ExcelStyles.BORDER_THIN

            if fill:
                cell.fill = fill

            if formats and col_idx in formats:
                cell.number_format = formats[col_idx]

        return self

    def set_cell(
        self,
        row: int,
        col: int,
        value: Any,
        font: Optional[Font] = None,
        fill: Optional[PatternFill] = None
    ) -> 'SheetBuilder':
        cell = self.ws.cell(row=row, column=col, value=value)

        if font:
            cell.font = font
        if fill:
            cell.fill = fill

        return self

    def set_column_widths(self, widths: Dict[str, int]) -> 'SheetBuilder':
        for col_letter, width in widths.items():
            self.ws.column_dimensions[col_letter].width = width

        return self


class EvaluationExcelPresenter:
    """
    Presents evaluation data in Excel format.

    Pure presentation - no metric computation, just formatting.
    """

    SHEETS = ["Summary", "Classification", "Periods", "RMSE", "Learning Curves"]

    def create_workbook(self, report_data: Dict[str, Any], output_path: Path):
        """
        Create the complete evaluation workbook.

        Args:
            report_data: Pre-formatted report data (from ReportDataGenerator)
            output_path: Where to save the Excel file
        """
        builder = ExcelWorkbookBuilder()

        self._create_summary_sheet(builder, report_data['summary'])
        self._create_classification_sheet(builder, report_data['classification'])
        self._create_periods_sheet(builder, report_data['periods'])
        self._create_rmse_sheet(builder, report_data['rmse'])
        self._create_learning_curves_sheet(builder, report_data['learning_curves'])

        builder.save(output_path)

    def _create_summary_sheet(self, builder: ExcelWorkbookBuilder, data: Dict):
        sheet = builder.create_sheet("Summary", 0)

        sheet.set_title(1, 1, "Leaf-Fall Prediction Evaluation", merge_to_col=4)

        sheet.set_cell(3, 1, "Holdout tree:")
        sheet.set_cell(3, 2, data['holdout_tree'])
        sheet.set_cell(4, 1, "Model:")
        sheet.set_cell(4, 2, data['model'])
        sheet.set_cell(5, 1, "Config hash:")
        sheet.set_cell(5, 2, data['config_hash'])
        sheet.set_cell(6, 1, "Threshold:")
        sheet.set_cell(6, 2, data['threshold'])

        sheet.set_cell(8, 1, "CLASSIFICATION", font=ExcelStyles.FONT_SECTION)
        sheet.set_header_row(9, ['Metric', 'Value'])
        rows = [
            ['Examples', data['examples']],
            ['Accuracy', data['accuracy']],
            ['Leaf-fall precision', data['leaf_fall_precision']],
            ['Leaf-fall recall', data['leaf_fall_recall']],
            ['Leaf-fall F1', data['leaf_fall_f1']],
            ['Epochs trained', data['epochs']],
        ]
        for idx, row_data in enumerate(rows, start=10):
            sheet.set_data_row(idx, row_data, formats={2: ExcelStyles.FORMAT_SCORE} if idx in (11, 12, 13, 14) else None)

        row = 10 + len(rows) + 1
        sheet.set_cell(row, 1, "PERIOD RMSE (DAYS)", font=ExcelStyles.FONT_SECTION)
        sheet.set_header_row(row + 1, ['Scope', 'Start', 'End', 'Overall'])
        for offset, values in enumerate(data['rmse_rows'], start=row + 2):
            sheet.set_data_row(offset, list(values), formats={2: ExcelStyles.FORMAT_SCORE, 3: ExcelStyles.FORMAT_SCORE, 4: ExcelStyles.FORMAT_SCORE})

        row = row + 2 + len(data['rmse_rows']) + 1
        sheet.set_cell(row, 1, "Status:")
        sheet.set_cell(row, 2, data['status_text'], font=self._get_status_font(data['status_score']))

        for offset, warning in enumerate(data['warnings'], start=row + 2):
            sheet.set_cell(offset, 1, "Warning:")
            sheet.set_cell(offset, 2, warning, fill=ExcelStyles.FILL_PARTIAL)

        sheet.set_column_widths({'A': 24, 'B': 40, 'C': 12, 'D': 12})

    def _get_status_font(self, f1: float) -> Font:
        if f1 >= 0.85:
            return Font(size=14, bold=True, color=ExcelStyles.COLOR_STATUS_GOOD)
        elif f1 >= 0.6:
            return Font(size=14, bold=True, color=ExcelStyles.COLOR_STATUS_WARN)
        else:
            return Font(size=14, bold=True, color=ExcelStyles.COLOR_STATUS_BAD)

    def _create_classification_sheet(self, builder: ExcelWorkbookBuilder, data: List[Dict]):
        sheet = builder.create_sheet("Classification")
        sheet.set_header_row(1, ['Class', 'Precision', 'Recall', 'F1', 'Support'])

        for idx, row in enumerate(data, start=2):
            sheet.set_data_row(
                idx,
                [row['label'], row['precision'], row['recall'], row['f1'], row['support']],
                formats={2: ExcelStyles.FORMAT_SCORE, 3: ExcelStyles.FORMAT_SCORE, 4: ExcelStyles.FORMAT_SCORE}
            )

        sheet.set_column_widths({'A': 18})

    def _create_periods_sheet(self, builder: ExcelWorkbookBuilder, data: List[Dict]):
        sheet = builder.create_sheet("Periods")
        headers = [
            'Tree', 'Year', 'Predicted Start', 'Predicted End',
            'Actual Start', 'Actual End', 'Start Diff (days)', 'End Diff (days)'
        ]
        sheet.set_header_row(1, headers)

        for idx, row in enumerate(data, start=2):
            row_data = [
                row['tree_id'], row['year'], row['pred_start'], row['pred_end'],
                row['actual_start'], row['actual_end'], row['start_diff'], row['end_diff']
            ]
            sheet.set_data_row(
                idx,
                row_data,
                fill=self._get_period_fill(row),
                formats={7: ExcelStyles.FORMAT_DAYS, 8: ExcelStyles.FORMAT_DAYS}
            )

        sheet.set_column_widths({'A': 12, 'C': 16, 'D': 16, 'E': 16, 'F': 16, 'G': 18, 'H': 18})

    def _get_period_fill(self, row: Dict) -> PatternFill:
        if row['status'] != 'BOTH':
            return ExcelStyles.FILL_PARTIAL
        if max(row['start_diff'], row['end_diff']) <= 7:
            return ExcelStyles.FILL_GOOD
        return ExcelStyles.FILL_BAD

    def _create_rmse_sheet(self, builder: ExcelWorkbookBuilder, data: List[Dict]):
        sheet = builder.create_sheet("RMSE")
        sheet.set_header_row(1, ['Scope', 'Tree', 'Year', 'Start Diff (days)', 'End Diff (days)', 'Overall'])

        for idx, row in enumerate(data, start=2):
            is_total = row['tree_id'] == 'RMSE'
            sheet.set_data_row(
                idx,
                [row['scope'], row['tree_id'], row['year'], row['start_diff'], row['end_diff'], row.get('overall')],
                fill=ExcelStyles.FILL_PARTIAL if is_total else None,
                formats=(
                    {4: ExcelStyles.FORMAT_SCORE, 5: ExcelStyles.FORMAT_SCORE, 6: ExcelStyles.FORMAT_SCORE}
                    if is_total else {4: ExcelStyles.FORMAT_DAYS, 5: ExcelStyles.FORMAT_DAYS}
                )
            )

        sheet.set_column_widths({'A': 12, 'D': 18, 'E': 18})

    def _create_learning_curves_sheet(self, builder: ExcelWorkbookBuilder, data: List[Dict]):
        sheet = builder.create_sheet("Learning Curves")
        sheet.set_header_row(1, ['Epoch', 'Train Loss', 'Train Accuracy', 'Val Loss', 'Val Accuracy'])

        for idx, row in enumerate(data, start=2):
            sheet.set_data_row(
                idx,
                [row['epoch'], row['train_loss'], row['train_acc'], row['val_loss'], row['val_acc']],
                formats={2: ExcelStyles.FORMAT_LOSS, 3: ExcelStyles.FORMAT_LOSS, 4: ExcelStyles.FORMAT_LOSS, 5: ExcelStyles.FORMAT_LOSS}
            )

        sheet.set_column_widths({'B': 14, 'C': 16, 'D': 14, 'E': 16})
