"""demoviz: demonstration-driven interaction design for declarative charts.

Interprets recorded pointer-event demonstrations over a static chart,
suggests interaction designs through a four-phase rule system, and compiles
accepted designs into Vega-Lite or Vega documents.
"""

from __future__ import annotations

from .chart import ChartSpec, ViewProfile, infer_measure_type, load_chart, profile_view, save_chart
from .compiler import CompiledSpec, compile_vega, compile_vegalite, is_expressible_vegalite, lower_selection
from .heuristics import SuggestionSet, WidgetSuggestionSet, suggest, suggest_widgets
from .interactions import (
    InteractionDef,
    InteractionSet,
    enumerate_signals,
    parse_interactions,
    validate_interaction,
    validate_set,
    widget_predicate,
)
from .trace import Demonstration, InputEvent, classify, chunk_clicks, drag_angle, parse_trace

__version__ = "0.1.0"

__all__ = [
    "ChartSpec",
    "CompiledSpec",
    "Demonstration",
    "InputEvent",
    "InteractionDef",
    "InteractionSet",
    "SuggestionSet",
    "ViewProfile",
    "WidgetSuggestionSet",
    "__version__",
    "chunk_clicks",
    "classify",
    "compile_vega",
    "compile_vegalite",
    "drag_angle",
    "enumerate_signals",
    "infer_measure_type",
    "is_expressible_vegalite",
    "load_chart",
    "lower_selection",
    "parse_interactions",
    "parse_trace",
    "profile_view",
    "save_chart",
    "suggest",
    "suggest_widgets",
    "validate_interaction",
    "validate_set",
    "widget_predicate",
]
