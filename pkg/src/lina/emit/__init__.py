"""Code generators: typed IR to LaTeX, Python and C++ source text.

Each generator is a pure function of (TypedProgram, entry name); emitted
text is deterministic down to the byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import err
from ..sema import TypedProgram


class OutputTarget(Enum):
    LATEX = "latex"
    PY = "py"
    CPP = "cpp"


FILE_SUFFIX = {OutputTarget.LATEX: ".tex", OutputTarget.PY: ".py",
               OutputTarget.CPP: ".cpp"}


@dataclass(frozen=True)
class EmittedUnit:
    target: OutputTarget
    file_name: str
    text: str
    entry_name: str


def emit(program: TypedProgram, target: OutputTarget, entry_name: str,
         latex_framing: str = "standalone") -> EmittedUnit:
    """Generate one self-contained source unit for the chosen target."""
    from . import cppgen, latex, pygen

    if target is OutputTarget.LATEX:
        text = latex.generate(program, entry_name, framing=latex_framing)
    elif target is OutputTarget.PY:
        if program.has_argmin:
            raise err("E_UNSUPPORTED_TARGET",
                      "argmin/min only emits to the latex target")
        text = pygen.generate(program, entry_name)
    elif target is OutputTarget.CPP:
        if program.has_argmin:
            raise err("E_UNSUPPORTED_TARGET",
                      "argmin/min only emits to the latex target")
        text = cppgen.generate(program, entry_name)
    else:
        raise ValueError(target)
    return EmittedUnit(target, entry_name + FILE_SUFFIX[target], text, entry_name)
