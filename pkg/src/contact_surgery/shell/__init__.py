"""Script language, runner, report writer and diagram renderer."""

from .render import render_dividing_set
from .runner import SCHEMA, RunContext, ScriptError, execute, report, report_json
from .script import Script, Statement, format_statement, parse, pretty

__all__ = [
    "SCHEMA", "RunContext", "Script", "ScriptError", "Statement", "execute",
    "format_statement", "parse", "pretty", "render_dividing_set", "report", "report_json",
]
