"""Presentation layer: SVG charts and the Excel evaluation workbook."""
