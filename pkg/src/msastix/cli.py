"""Command-line entry point.

Subcommands: validate, lint, score, encode, init-extension, serve, pull,
push. Exit codes: 0 success, 1 error findings, 2 usage or IO failure.
Findings print as human text (with a closing "N errors, M warnings" line)
or as JSON lines with --format json; identical inputs always produce
byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from . import declarative
from .codec import (
    DecodeWarning,
    canonical_json,
    decode_bundle,
    encode_bundle,
    extension_definition,
    to_wire_dict,
)
from .errors import (
    BadIdGrammarError,
    ConfidenceOutOfRangeError,
    LocalValidationFailedError,
    MalformedJsonError,
    MsaError,
    UnvalidatedBundleError,
)
from .situation import assemble_situations, score, score_report_json
from .taxii.client import TaxiiClient
from .taxii.server import load_server_config, serve_forever
from .validator import (
    Finding,
    default_registry,
    lint_labels,
    load_denylist,
    load_registry,
    make_finding,
    sort_findings,
    validate_bundle,
)

TOKEN_ENV = "MSA_STIX_TOKEN"

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_registry_arg(path: Optional[str]):
    if path is None:
        return default_registry()
    return load_registry(path)


def _warning_to_finding(warning: DecodeWarning) -> Finding:
    return Finding(severity="warning", code=warning.code,
                   object_id=warning.object_id, message=warning.message,
                   dimension="syntactic")


def _print_findings(findings: List[Finding], fmt: str) -> None:
    if fmt == "json":
        for finding in findings:
            print(finding.to_json())
        return
    for finding in findings:
        print(str(finding))
    errors = sum(1 for f in findings if f.severity == "error")
    warnings = sum(1 for f in findings if f.severity == "warning")
    print(f"{errors} errors, {warnings} warnings")


def _findings_exit(findings: List[Finding]) -> int:
    return EXIT_FINDINGS if any(f.severity == "error" for f in findings) \
        else EXIT_OK


def _decode_file(path: str):
    """(objects, warnings, hard-error finding or None)."""
    text = _read_text(path)
    try:
        objects, warnings = decode_bundle(text)
        return objects, warnings, None
    except BadIdGrammarError as exc:
        return None, [], make_finding("BAD_ID_GRAMMAR", exc.object_id,
                                      exc.message)
    except ConfidenceOutOfRangeError as exc:
        return None, [], make_finding("CONFIDENCE_RANGE", exc.object_id,
                                      exc.message)


# --- subcommands --------------------------------------------------------------


def _cmd_validate(args) -> int:
    registry = _load_registry_arg(args.registry)
    objects, warnings, hard = _decode_file(args.bundle)
    if hard is not None:
        _print_findings([hard], args.format)
        return EXIT_FINDINGS
    findings = sort_findings(
        [_warning_to_finding(w) for w in warnings]
        + validate_bundle(objects, registry))
    _print_findings(findings, args.format)
    return _findings_exit(findings)


def _cmd_lint(args) -> int:
    denylist = load_denylist(args.denylist) if args.denylist else None
    objects, _, hard = _decode_file(args.bundle)
    if hard is not None:
        _print_findings([hard], args.format)
        return EXIT_FINDINGS
    findings = lint_labels(objects, denylist)
    _print_findings(findings, args.format)
    return _findings_exit(findings)


def _cmd_score(args) -> int:
    registry = _load_registry_arg(args.registry)
    objects, _, hard = _decode_file(args.bundle)
    if hard is not None:
        _print_findings([hard], "text")
        return EXIT_FINDINGS
    try:
        situations = assemble_situations(objects, registry)
    except UnvalidatedBundleError as exc:
        _print_findings(list(exc.findings), "text")
        return EXIT_FINDINGS
    scored = [(situation, score(situation)) for situation in situations]
    for situation, result in scored:
        print(score_report_json(situation, result))
    if args.figures_dir:
        from .figures import render_figures  # matplotlib import is heavy
        paths = render_figures(scored, args.figures_dir)
        print(f"wrote {len(paths)} figure(s) to {args.figures_dir}",
              file=sys.stderr)
    return EXIT_OK


def _cmd_encode(args) -> int:
    registry = _load_registry_arg(args.registry)
    doc = declarative.load_document(args.model_file)
    objects = declarative.build_objects(doc, registry)
    text = encode_bundle(objects)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_init_extension(args) -> int:
    text = canonical_json(to_wire_dict(extension_definition()))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_serve(args) -> int:
    config = load_server_config(args.config)
    serve_forever(config)
    return EXIT_OK


def _client(args, env) -> TaxiiClient:
    token = env.get(TOKEN_ENV, "")
    return TaxiiClient(args.url, token)


def _cmd_pull(args, env) -> int:
    client = _client(args, env)
    bundle = client.pull(args.collection, added_after=args.added_after,
                         page_size=args.page_size)
    text = encode_bundle(bundle)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"pulled {len(bundle.objects)} object(s) to {args.output}",
              file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


def _cmd_push(args, env) -> int:
    objects, warnings, hard = _decode_file(args.bundle)
    if hard is not None:
        _print_findings([hard], "text")
        return EXIT_FINDINGS
    client = _client(args, env)
    try:
        status = client.push(args.collection, objects)
    except LocalValidationFailedError as exc:
        _print_findings(list(exc.findings), "text")
        return EXIT_FINDINGS
    print(json.dumps(status, sort_keys=True))
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msastix",
        description="Model, validate, score, and exchange MSA campaign "
                    "bundles over a TAXII 2.1 subset.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="decode a bundle and report findings")
    p.add_argument("bundle", help="bundle JSON file")
    p.add_argument("--registry", help="vocabulary registry JSON file")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("lint", help="label-quality lint for a bundle")
    p.add_argument("bundle", help="bundle JSON file")
    p.add_argument("--denylist", help="JSON array of low-signal technique ids")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("score", help="assemble and score diamond situations")
    p.add_argument("bundle", help="bundle JSON file")
    p.add_argument("--registry", help="vocabulary registry JSON file")
    p.add_argument("--figures-dir",
                   help="also render diamond figures into this directory")

    p = sub.add_parser("encode",
                       help="turn a declarative object file into a bundle")
    p.add_argument("model_file", help="declarative JSON document")
    p.add_argument("-o", "--output", help="write the bundle here")
    p.add_argument("--registry", help="vocabulary registry JSON file")

    p = sub.add_parser("init-extension",
                       help="emit the extension-definition object")
    p.add_argument("-o", "--output", help="write the object here")

    p = sub.add_parser("serve", help="run the TAXII-subset server")
    p.add_argument("--config", required=True, help="server config JSON file")

    p = sub.add_parser("pull", help="fetch a collection into a bundle file")
    p.add_argument("--url", required=True)
    p.add_argument("--collection", required=True)
    p.add_argument("--added-after", dest="added_after")
    p.add_argument("--page-size", dest="page_size", type=int)
    p.add_argument("-o", "--output", help="write the bundle here")

    p = sub.add_parser("push", help="validate locally and upload a bundle")
    p.add_argument("--url", required=True)
    p.add_argument("--collection", required=True)
    p.add_argument("bundle", help="bundle JSON file")

    return parser


def run(argv: Optional[Sequence[str]] = None,
        env: Optional[dict] = None) -> int:
    env = dict(os.environ) if env is None else env
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse prints its own synopsis; normalize the exit code
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "lint":
            return _cmd_lint(args)
        if args.command == "score":
            return _cmd_score(args)
        if args.command == "encode":
            return _cmd_encode(args)
        if args.command == "init-extension":
            return _cmd_init_extension(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "pull":
            return _cmd_pull(args, env)
        if args.command == "push":
            return _cmd_push(args, env)
        return _fail(f"unknown command {args.command!r}")
    except MalformedJsonError as exc:
        return _fail(f"malformed bundle: {exc.message}")
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        return _fail(str(exc))
    except MsaError as exc:
        return _fail(f"{exc.code}: {exc.message}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
