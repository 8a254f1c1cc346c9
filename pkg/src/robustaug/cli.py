"""Command-line entry point.

Subcommands: ``img corrupt``, ``text augment``, ``policy sample``,
``apply-policy``, ``gen-testsets``, ``eval``. Exit codes: 0 success,
1 I/O failure, 2 usage/validation, 3 external-service failure.

Every artifact written carries provenance (tool version, seed, parameters)
sufficient to regenerate it byte-exactly. Omitting ``--seed`` picks a random
seed and records it, rather than leaving the run irreproducible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .augpolicy import PolicyConfig, apply_policy, sample_image_aug, sample_text_aug, write_audit
from .dataset import generate_test_suite, load_manifest
from .errors import (
    DegenerateEmbeddingError,
    EmbeddingFormatError,
    EmptySentenceError,
    InvalidSpecError,
    ProtocolError,
    RobustAugError,
    SchemaError,
    ShapeError,
    TransportError,
)
from .imgcorrupt import (
    ALL_KINDS,
    CorruptionSpec,
    SeverityTable,
    corrupt,
    load_image,
    save_png,
)
from .retrieval import evaluate
from .textaug import TEXT_AUG_KINDS, HttpTranslator, IdentityTranslator, augment_text

TRANSLATOR_ENV = "ROBUSTAUG_TRANSLATOR"

_VALIDATION_ERRORS = (
    InvalidSpecError,
    SchemaError,
    ProtocolError,
    EmbeddingFormatError,
    EmptySentenceError,
    DegenerateEmbeddingError,
    ShapeError,
)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = int.from_bytes(os.urandom(8), "little")
    print(f"note: --seed not given; using recorded seed {seed}", file=sys.stderr)
    return seed


def _resolve_translator(name: str | None):
    endpoint = os.environ.get(TRANSLATOR_ENV)
    if name in (None, "stub", "identity"):
        return IdentityTranslator()
    if name == "real":
        if not endpoint:
            raise InvalidSpecError(
                f"--translator real needs the {TRANSLATOR_ENV} environment variable"
            )
        return HttpTranslator(endpoint)
    if name.startswith(("http://", "https://")):
        return HttpTranslator(name)
    raise InvalidSpecError(
        f"unknown translator {name!r}; use 'stub', 'real', or an http(s) endpoint"
    )


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _provenance(command: str, **fields) -> dict:
    return {"tool": "robustaug", "version": __version__, "command": command, **fields}


# --- subcommands -------------------------------------------------------------


def cmd_img_corrupt(args) -> int:
    seed = _resolve_seed(args)
    table = SeverityTable.from_file(args.severity_table) if args.severity_table else None
    image = load_image(args.infile)
    spec = CorruptionSpec(args.kind, args.severity, seed)
    out = corrupt(image, spec, table)
    save_png(out, args.out)
    prov = _provenance(
        "img corrupt",
        kind=args.kind,
        severity=args.severity,
        seed=seed,
        input=str(args.infile),
        input_sha256=_sha256(args.infile),
        output=str(args.out),
        output_sha256=_sha256(args.out),
        severity_table=str(args.severity_table) if args.severity_table else "builtin",
    )
    Path(f"{args.out}.prov.json").write_text(json.dumps(prov, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_text_augment(args) -> int:
    seed = _resolve_seed(args)
    translator = _resolve_translator(args.translator)
    if args.text is not None:
        sentences = [args.text]
    else:
        sentences = [line for line in Path(args.infile).read_text("utf-8").splitlines() if line.strip()]
    outputs = []
    audit = []
    from .seeds import derive_subseed

    for i, sentence in enumerate(sentences):
        item_seed = derive_subseed(seed, f"sentence/{i}")
        result = augment_text(
            sentence, args.kind, item_seed, translator=translator, rate=args.rate
        )
        outputs.append(result.original_text)
        record = {
            "index": i,
            "kind": args.kind,
            "seed": item_seed,
            "input": sentence,
            "output": result.original_text,
            "changed": result.original_text != sentence,
        }
        if not record["changed"]:
            record["note"] = "no-op"
        if result.meta:
            record["meta"] = result.meta
        audit.append(record)

    rendered = "\n".join(outputs)
    if args.out:
        Path(args.out).write_text(rendered + "\n", encoding="utf-8")
    else:
        print(rendered)
    if args.audit:
        with open(args.audit, "w", encoding="utf-8") as f:
            for record in audit:
                f.write(json.dumps(record, sort_keys=True) + "\n")
    return 0


def cmd_policy_sample(args) -> int:
    seed = _resolve_seed(args)
    from .seeds import derive_subseed

    records = []
    for i in range(args.count):
        draw_seed = derive_subseed(seed, f"draw/{i}")
        if args.modality == "image":
            decision = sample_image_aug(draw_seed)
        else:
            decision = sample_text_aug(draw_seed)
        records.append(decision.as_dict() | {"index": i})
    text = "\n".join(json.dumps(r, sort_keys=True) for r in records)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_apply_policy(args) -> int:
    seed = _resolve_seed(args)
    image = load_image(args.image)
    out_image, out_captions, audit = apply_policy(
        image,
        args.caption,
        seed,
        config=PolicyConfig.from_file(args.policy_config) if args.policy_config else None,
        translator=_resolve_translator(args.translator),
        item_id=str(args.image),
    )
    save_png(out_image, args.out_image)
    payload = {
        "provenance": _provenance("apply-policy", seed=seed, image=str(args.image)),
        "captions": out_captions,
        "decisions": [d.as_dict() for d in audit],
    }
    if args.out_json:
        Path(args.out_json).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    if args.audit:
        write_audit(audit, args.audit)
    return 0


def cmd_gen_testsets(args) -> int:
    seed = _resolve_seed(args)
    manifest = load_manifest(args.manifest).restrict_to_split("test")
    if not manifest.items:
        raise SchemaError(f"{args.manifest}: no items with split=test")
    suite = generate_test_suite(
        manifest,
        severity=args.severity,
        seed=seed,
        out_dir=args.out_dir,
        workers=args.workers,
        translator=_resolve_translator(args.translator),
    )
    n_items = len(suite.clean.items)
    summary = {
        "items": n_items,
        "seen_variants": len(suite.seen),
        "unseen_variants": len(suite.unseen),
        "mixed_variants": len(suite.mixed),
        "text_variants": len(suite.text),
        "files_written": suite.files_written,
        "files_unchanged": suite.files_unchanged,
        "seed": seed,
        "severity": args.severity,
        "out_dir": str(suite.out_dir),
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(
            f"{summary['seen_variants']} seen + {summary['unseen_variants']} unseen + "
            f"{summary['mixed_variants']} mixed image variants and "
            f"{summary['text_variants']} text variants over {n_items} items -> {suite.out_dir}"
        )
        if suite.files_written == 0:
            print("up-to-date, 0 files rewritten")
        else:
            print(f"{suite.files_written} files written, {suite.files_unchanged} unchanged")
    return 0


def cmd_eval(args) -> int:
    report = evaluate(args.img_emb, args.txt_emb, args.protocol, folds=args.folds)
    rendered = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        Path(args.out).write_text(rendered + "\n", encoding="utf-8")
    else:
        print(rendered)
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustaug",
        description="Deterministic image/text augmentation and retrieval robustness evaluation",
    )
    parser.add_argument("--version", action="version", version=f"robustaug {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    img = sub.add_parser("img", help="image corruption commands")
    img_sub = img.add_subparsers(dest="subcommand", required=True)
    corrupt_p = img_sub.add_parser("corrupt", help="apply one corruption to one image")
    corrupt_p.add_argument("--in", dest="infile", required=True)
    corrupt_p.add_argument("--kind", required=True, choices=ALL_KINDS, metavar="KIND")
    corrupt_p.add_argument("--severity", type=int, required=True, choices=(1, 2, 3, 4, 5))
    corrupt_p.add_argument("--seed", type=int)
    corrupt_p.add_argument("--out", required=True)
    corrupt_p.add_argument("--severity-table", help="override the built-in severity table")
    corrupt_p.set_defaults(func=cmd_img_corrupt)

    text = sub.add_parser("text", help="text augmentation commands")
    text_sub = text.add_subparsers(dest="subcommand", required=True)
    augment_p = text_sub.add_parser("augment", help="apply one augmentation to sentences")
    augment_p.add_argument("--kind", required=True, choices=TEXT_AUG_KINDS, metavar="KIND")
    group = augment_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="one sentence on the command line")
    group.add_argument("--in-file", dest="infile", help="file with one sentence per line")
    augment_p.add_argument("--seed", type=int)
    augment_p.add_argument("--rate", type=float, default=0.3, help="synonym replacement rate")
    augment_p.add_argument("--translator", help="'stub', 'real', or an http(s) endpoint")
    augment_p.add_argument("--out", help="write augmented sentences here instead of stdout")
    augment_p.add_argument("--audit", help="write a JSONL audit trail")
    augment_p.set_defaults(func=cmd_text_augment)

    policy = sub.add_parser("policy", help="augmentation policy commands")
    policy_sub = policy.add_subparsers(dest="subcommand", required=True)
    sample_p = policy_sub.add_parser("sample", help="sample policy decisions")
    sample_p.add_argument("--modality", required=True, choices=("image", "text"))
    sample_p.add_argument("--seed", type=int)
    sample_p.add_argument("-n", "--count", type=int, default=1)
    sample_p.add_argument("--out", help="write decisions JSONL here instead of stdout")
    sample_p.set_defaults(func=cmd_policy_sample)

    apply_p = sub.add_parser("apply-policy", help="augment one (image, captions) sample")
    apply_p.add_argument("--image", required=True)
    apply_p.add_argument("--caption", action="append", default=[], help="repeatable")
    apply_p.add_argument("--seed", type=int)
    apply_p.add_argument("--out-image", required=True)
    apply_p.add_argument("--out-json", help="write captions+decisions JSON here")
    apply_p.add_argument("--audit", help="append decisions to this JSONL audit trail")
    apply_p.add_argument("--policy-config", help="policy config JSON file")
    apply_p.add_argument("--translator")
    apply_p.set_defaults(func=cmd_apply_policy)

    gen_p = sub.add_parser("gen-testsets", help="materialize the corrupted test suite")
    gen_p.add_argument("--manifest", required=True)
    gen_p.add_argument("--out-dir", required=True)
    gen_p.add_argument("--severity", type=int, default=3, choices=(1, 2, 3, 4, 5))
    gen_p.add_argument("--seed", type=int)
    gen_p.add_argument("--workers", type=int, default=1)
    gen_p.add_argument("--translator")
    gen_p.add_argument("--format", choices=("json", "text"), default="text")
    gen_p.set_defaults(func=cmd_gen_testsets)

    eval_p = sub.add_parser("eval", help="evaluate retrieval embeddings")
    eval_p.add_argument("--img-emb", required=True)
    eval_p.add_argument("--txt-emb", required=True)
    eval_p.add_argument("--protocol", required=True, choices=("flickr30k", "coco1k"))
    eval_p.add_argument("--folds", type=int, default=5)
    eval_p.add_argument("--out", help="write the report here as well")
    eval_p.add_argument("--format", choices=("json", "text"), default="json")
    eval_p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(
            "the translator endpoint did not respond; check the endpoint, network, "
            f"and the {TRANSLATOR_ENV} environment variable, then retry",
            file=sys.stderr,
        )
        return 3
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RobustAugError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
