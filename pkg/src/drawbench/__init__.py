"""Headless verification engine for GUI drawing-action sequences."""
from .actions import Action, ActionSequence, SyntaxFailure, parse_actions, serialize_actions
from .dataset import Dataset, DatasetValidationError, TaskSpec, dataset_stats, load_dataset, load_seed
from .evaluator import CriteriaSpec, EvaluationReport, evaluate
from .feedback import FeedbackDocument, generate_feedback
from .geometry import DEFAULT_LAYOUT, CanvasSpec, Point, Rect, RegionKind, ToolKind, UILayout, load_layout
from .interpreter import DrawingTrace, interpret, trace_stats
from .render import render_svg

__version__ = "0.1.0"
