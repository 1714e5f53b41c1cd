"""Validators package initialization."""
from .record_validator import is_skippable, split_record, iter_records, split_relations

__all__ = ['is_skippable', 'split_record', 'iter_records', 'split_relations']
