"""
Report payloads for the command line.

JSON is the contract; the text format renders the same payload for humans.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from app.services.decision import (
    Certificate,
    FailingTranslateCertificate,
    PartitionCertificate,
    QuadrantCertificate,
    SignConflictCertificate,
    TranslatesCertificate,
    ViolationCertificate,
    Witness,
)
from app.services.oracle import CrossCheck
from app.services.splitting_complex import ComplexOutput
from app.utils.documents import class_to_json


class CheckReport(BaseModel):
    command: str = "check"
    name: str
    verdict: bool
    cover_verdict: bool
    certificate: Optional[Dict[str, Any]] = None
    cover_certificate: Optional[Dict[str, Any]] = None


class DisjointReport(BaseModel):
    command: str = "disjoint"
    names: List[str]
    scope: str
    verdict: bool
    certificate: Optional[Dict[str, Any]] = None


class ComplexReport(BaseModel):
    command: str = "complex"
    vertices: List[Dict[str, Any]]
    edges: List[List[int]]
    simplices: List[List[int]]
    facets: List[List[int]]
    simplex_rule: str
    rejected: List[Dict[str, Any]]


class OracleReport(BaseModel):
    command: str = "oracle"
    verdict: bool
    checks: List[Dict[str, Any]]


class ErrorReport(BaseModel):
    error: str
    message: str
    path: Optional[str] = None


def witness_to_json(w: Witness) -> Dict[str, Any]:
    return {"source": w.pair.source.to_json(), "target": w.pair.target.to_json(), "values": list(w.values)}


def certificate_to_json(cert: Optional[Certificate], detail: bool = True) -> Optional[Dict[str, Any]]:
    """
    Serialize a certificate.

    With ``detail`` false only the kind and the failing translate are kept.
    """
    if cert is None:
        return None
    payload: Dict[str, Any] = {"kind": cert.kind}
    if isinstance(cert, FailingTranslateCertificate):
        payload["g"] = cert.g.to_json()
        if detail:
            payload["inner"] = certificate_to_json(cert.inner)
        return payload
    if not detail:
        return payload
    if isinstance(cert, PartitionCertificate):
        payload["sides"] = [{"vertex": v.to_json(), "side": side} for v, side in cert.sides]
    elif isinstance(cert, ViolationCertificate):
        payload["pair"] = witness_to_json(cert.witness)
    elif isinstance(cert, SignConflictCertificate):
        payload["same_sign"] = witness_to_json(cert.same_sign)
        payload["opposite_sign"] = witness_to_json(cert.opposite_sign)
    elif isinstance(cert, QuadrantCertificate):
        payload["occupied"] = [list(q) for q in cert.occupied]
        payload["empty"] = [list(q) for q in cert.empty]
        payload["dependent"] = cert.dependent
    elif isinstance(cert, TranslatesCertificate):
        payload["checked"] = [g.to_json() for g in cert.checked]
    return payload


def complex_report(output: ComplexOutput, detail: bool = True) -> ComplexReport:
    return ComplexReport(
        vertices=[{"canonical": class_to_json(v.canonical), "sources": list(v.sources)} for v in output.vertices],
        edges=[list(e) for e in output.edges],
        simplices=[list(s) for s in output.simplices],
        facets=[list(s) for s in output.facets],
        simplex_rule=output.simplex_rule,
        rejected=[
            {
                "index": r.index,
                "reason": r.reason,
                "certificate": certificate_to_json(r.certificate, detail),
                "detail": r.detail,
            }
            for r in output.rejected
        ],
    )


def cross_check_to_json(name: str, result: CrossCheck) -> Dict[str, Any]:
    return {
        "name": name,
        "decision": result.decision,
        "oracle": result.oracle,
        "agree": result.agree,
        "paths": result.paths,
        "path_mismatches": result.path_mismatches,
        "max_len": result.max_len,
    }


def render_text(payload: Dict[str, Any], indent: int = 0) -> str:
    """Indented key: value rendering of a JSON payload."""
    lines = []
    pad = "  " * indent
    for key, value in payload.items():
        if value is None:
            continue
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.append(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(line for line in lines if line)
