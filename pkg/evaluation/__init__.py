"""Evaluation package initialization."""
from .labels import LabelSet, load_labels
from .clustering import KMeansResult, export_clusters, kmeans, nmi
from .classification import SoftmaxRegression, classify, f1_scores, per_class_scores, stratified_split
from .ranking import MapResult, average_precision_at_k, link_auc, map_at_k, similarity_matrix, top_k_neighbors
from .report import EvalReport, render_key_values, render_table, write_report

__all__ = [
    'LabelSet', 'load_labels',
    'KMeansResult', 'export_clusters', 'kmeans', 'nmi',
    'SoftmaxRegression', 'classify', 'f1_scores', 'per_class_scores', 'stratified_split',
    'MapResult', 'average_precision_at_k', 'link_auc', 'map_at_k', 'similarity_matrix', 'top_k_neighbors',
    'EvalReport', 'render_key_values', 'render_table', 'write_report',
]
