from .report_store import ReportStore, canonical_json

__all__ = ['ReportStore', 'canonical_json']
