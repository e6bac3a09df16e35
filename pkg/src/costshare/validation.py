"""Input coercion helpers, in the spirit of ``sklearn.utils.check_array``."""
from __future__ import annotations

import json
import os

from .exceptions import InstanceError, MissingBudgetError, ReportError
from .graph import Instance, ReportProfile, instance_from_dict, parse_instance, report_from_dict


def check_instance(instance, require_budgets: bool = False) -> Instance:
    """Accept an Instance, a parsed JSON dict, JSON text or a path to a JSON file."""
    if isinstance(instance, Instance):
        out = instance
    elif isinstance(instance, dict):
        out = instance_from_dict(instance)
    elif isinstance(instance, (str, os.PathLike)):
        text = str(instance)
        if isinstance(instance, os.PathLike) or not text.lstrip().startswith("{"):
            try:
                with open(text, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InstanceError(f"cannot read instance: {exc}") from None
        out = parse_instance(text)
    else:
        raise InstanceError(f"cannot interpret {type(instance).__name__} as an instance")
    if require_budgets:
        missing = [n for n in out.players if n not in out.budgets]
        if missing:
            raise MissingBudgetError(f"missing budget for node(s): {', '.join(missing)}")
    return out


def check_report(report, instance: Instance) -> ReportProfile:
    """``None`` means everyone reports truthfully."""
    if report is None:
        return ReportProfile.truthful()
    if isinstance(report, ReportProfile):
        return report
    if isinstance(report, dict):
        return report_from_dict(report, instance)
    if isinstance(report, (str, os.PathLike)):
        text = str(report)
        if isinstance(report, os.PathLike) or not text.lstrip().startswith("{"):
            try:
                with open(text, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ReportError(f"cannot read report: {exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ReportError(f"malformed report: {exc.msg}") from None
        return report_from_dict(doc, instance)
    raise ReportError(f"cannot interpret {type(report).__name__} as a report")
