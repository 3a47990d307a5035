"""The synthetic expression grammar: `the <color> <shape>`.

The built-in backends and the scene generator share this tiny vocabulary so
that generated scenes are always describable and described targets always
renderable. Canonical colors sit at channel extremes; the scene background
is a dark gray that no canonical color's match threshold reaches.
"""

from __future__ import annotations

from .errors import ExpressionParseError

COLORS: dict[str, tuple[int, int, int]] = {
    "red": (255, 0, 0),
    "green": (0, 255, 0),
    "blue": (0, 0, 255),
    "yellow": (255, 255, 0),
    "white": (255, 255, 255),
}

SHAPES = ("circle", "square", "triangle", "any")

BACKGROUND_RGB = (32, 32, 32)


def parse_expression(text: str) -> tuple[str, str]:
    """Parse `the <color> <shape>` into (color, shape) or raise ExpressionParseError."""
    words = text.strip().lower().split()
    if len(words) != 3 or words[0] != "the":
        raise ExpressionParseError(f"expected 'the <color> <shape>', got {text!r}")
    color, shape = words[1], words[2]
    if color not in COLORS:
        raise ExpressionParseError(f"unknown color {color!r} (have {sorted(COLORS)})")
    if shape not in SHAPES:
        raise ExpressionParseError(f"unknown shape {shape!r} (have {list(SHAPES)})")
    return color, shape


def expression_for(color: str, shape: str) -> str:
    return f"the {color} {shape}"
