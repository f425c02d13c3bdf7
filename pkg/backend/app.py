"""
Flask Backend for Pathway Queries
=================================
REST endpoints over the same operations as the command line. Every POST
body carries the pathway text; numeric options fall back to settings.

    POST /api/simulate  {"pathway": "...", "steps": 5, "max_tokens": 20}
    POST /api/query     {"pathway": "...", "query": "..."}
    POST /api/export    {"pathway": "...", "level": "maxfire", "query": "..."}
    POST /api/validate  {"pathway": "..."}
"""

import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, Optional, Tuple

from flask import Flask, jsonify, request
from flask_cors import CORS

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli.main import pathway_diagnostics, trajectories_json
from export.asp import EncodingLevel, ResetStyle, emit_program
from export.observations import emit_observation_constraints
from model.errors import PathQueryError, PathwaySyntaxError, QuerySyntaxError
from model.net import FiringStyle
from pathway.compiler import compile_pathway
from pathway.consistency import check_consistency, errors_only
from pathway.parser import parse_pathway
from query.engine import evaluate, simulate_spec
from query.interventions import build_domains
from query.parser import parse_query
from query.render import echo_query
from util.settings import get_settings

logger = logging.getLogger(__name__)

app = Flask(__name__)

LOCAL_ORIGINS = ["http://localhost:3000", "http://127.0.0.1:3000"]

CORS(app,
     resources={
         r"/api/*": {
             "origins": LOCAL_ORIGINS,
             "methods": ["POST", "OPTIONS"],
             "allow_headers": ["Content-Type", "Accept"],
             "max_age": 3600
         },
         r"/health": {
             "origins": LOCAL_ORIGINS,
             "methods": ["GET", "OPTIONS"],
             "allow_headers": ["Content-Type"]
         }
     })


class BadRequest(Exception):
    """A request body that is missing a field or has a malformed one"""


def _body() -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise BadRequest("Request body must be a JSON object")
    if not isinstance(data.get("pathway"), str):
        raise BadRequest("pathway is required")
    return data


def _options(data: Dict[str, Any]) -> Tuple[int, int, Optional[FiringStyle]]:
    settings = get_settings()
    try:
        steps = int(data.get("steps", settings.default_steps))
        max_tokens = int(data.get("max_tokens", settings.default_max_tokens))
    except (TypeError, ValueError):
        raise BadRequest("steps and max_tokens must be integers")
    if steps < 0 or max_tokens < 1:
        raise BadRequest("steps must be >= 0 and max_tokens >= 1")
    style = data.get("firing_style")
    return steps, max_tokens, FiringStyle.parse(style) if style else None


def _error(e: Exception):
    if isinstance(e, (BadRequest, PathwaySyntaxError, QuerySyntaxError, ValueError)):
        return jsonify({"error": str(e), "type": type(e).__name__}), 400
    if isinstance(e, PathQueryError):
        return jsonify({"error": str(e), "type": type(e).__name__}), 422
    logger.exception("Unhandled error")
    return jsonify({"error": str(e), "type": type(e).__name__}), 500


@app.route('/health', methods=['GET'])
def health_check():
    """Health check endpoint."""
    return jsonify({
        "status": "healthy",
        "timestamp": datetime.now().isoformat(),
        "max_trajs": get_settings().max_trajs
    })


@app.route('/api/simulate', methods=['POST'])
def simulate():
    """All complete trajectories of a pathway."""
    try:
        data = _body()
        steps, max_tokens, style = _options(data)
        spec = parse_pathway(data["pathway"])
        trajs = simulate_spec(spec, steps, max_tokens, style, non_reentrant=bool(data.get("non_reentrant")))
        return jsonify({
            "trajectories": trajectories_json(trajs),
            "count": len(trajs),
            "firing_style": (style or spec.firing_style).value
        })
    except Exception as e:
        return _error(e)


@app.route('/api/query', methods=['POST'])
def query():
    """Evaluate a query; the echo has its unknowns filled in."""
    try:
        data = _body()
        if not isinstance(data.get("query"), str):
            raise BadRequest("query is required")
        steps, max_tokens, style = _options(data)
        spec = parse_pathway(data["pathway"])
        stmt = parse_query(data["query"])
        result = evaluate(spec, stmt, k=steps, cap=max_tokens, style=style,
                          non_reentrant=bool(data.get("non_reentrant")))
        return jsonify({"result": result.to_dict(), "echo": echo_query(stmt, result, steps)})
    except Exception as e:
        return _error(e)


@app.route('/api/export', methods=['POST'])
def export():
    """ASP program text, with the query's observations appended when one is given."""
    try:
        data = _body()
        steps, max_tokens, style = _options(data)
        spec = parse_pathway(data["pathway"])
        observations = ()
        if data.get("query"):
            stmt = parse_query(data["query"])
            _, spec = build_domains(spec, stmt)
            observations = stmt.observations
        errors = errors_only(check_consistency(spec, max_tokens))
        if errors:
            return jsonify({"diagnostics": [d.to_dict() for d in errors]}), 422
        net = compile_pathway(spec)
        if style is not None:
            net = net.with_style(style)
        if data.get("non_reentrant"):
            net = net.non_reentrant()
        level = EncodingLevel.parse(str(data["level"])) if data.get("level") is not None else None
        reset_style = ResetStyle.parse(data.get("reset_style", ResetStyle.CONTENTION.value))
        program = emit_program(net, level, steps, max_tokens, reset_style)
        constraints = emit_observation_constraints(observations, steps, net.is_colored)
        if constraints:
            program += "\n\n" + constraints
        return jsonify({"program": program})
    except Exception as e:
        return _error(e)


@app.route('/api/validate', methods=['POST'])
def validate():
    """Diagnostics for a pathway; ok is false when any is an error."""
    try:
        data = _body()
        _, max_tokens, _ = _options(data)
        found = pathway_diagnostics(parse_pathway(data["pathway"]), max_tokens)
        return jsonify({
            "ok": not errors_only(found),
            "diagnostics": [d.to_dict() for d in found]
        })
    except Exception as e:
        return _error(e)


if __name__ == '__main__':
    settings = get_settings()
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logger.info("Starting pathway query API on http://%s:%d", settings.api_host, settings.api_port)
    app.run(host=settings.api_host, port=settings.api_port)
