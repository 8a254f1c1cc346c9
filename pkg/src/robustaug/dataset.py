"""Caption-dataset manifests and corrupted test-set materialization.

Manifest schema (JSONL, UTF-8), one object per item:
    {"id": int, "image": relative path, "captions": [5 strings],
     "split": "train"|"val"|"test"}
A first line of the form {"manifest_provenance": {...}} is optional and
carries suite-level provenance. Corrupted variants add per item either
    {"corruption": {"kind", "severity", "seed"}}   (image variants)
or  {"text_aug": {"kind", "seed"}}                 (text variants).

Image variants live in one directory per kind, mirroring clean filenames;
text variants reference the clean images unchanged.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidSpecError, ManifestValidationError, SchemaError
from .imgcorrupt import (
    MIXED_KINDS,
    SEEN_KINDS,
    UNSEEN_KINDS,
    CorruptionSpec,
    corrupt,
    load_image,
    png_bytes,
)
from .seeds import derive_subseed
from .textaug import TEXT_AUG_KINDS, IdentityTranslator, augment_text

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")
CAPTIONS_PER_ITEM = 5


@dataclass(frozen=True)
class ManifestItem:
    id: int
    image: str
    captions: tuple[str, ...]
    split: str
    corruption: dict | None = None
    text_aug: dict | None = None

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "image": self.image,
            "captions": list(self.captions),
            "split": self.split,
        }
        if self.corruption:
            record["corruption"] = self.corruption
        if self.text_aug:
            record["text_aug"] = self.text_aug
        return record


@dataclass(frozen=True)
class Manifest:
    items: tuple[ManifestItem, ...]
    provenance: dict = field(default_factory=dict)
    root: Path | None = None

    def split_counts(self) -> dict[str, int]:
        counts = {s: 0 for s in SPLITS}
        for item in self.items:
            counts[item.split] += 1
        return counts

    def restrict_to_split(self, split: str) -> "Manifest":
        return Manifest(
            tuple(i for i in self.items if i.split == split), dict(self.provenance), self.root
        )

    def ids(self) -> tuple[int, ...]:
        return tuple(i.id for i in self.items)


def load_manifest(path, check_images: bool = True) -> Manifest:
    """Read and validate a JSONL manifest. ``check_images`` verifies that
    every referenced image file exists (relative to the manifest)."""
    path = Path(path)
    root = path.parent
    items: list[ManifestItem] = []
    provenance: dict = {}
    with open(path, "r", encoding="utf-8") as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty manifest")
    for lineno, line in enumerate(lines, 1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if lineno == 1 and isinstance(record, dict) and "manifest_provenance" in record:
            provenance = record["manifest_provenance"]
            continue
        if not isinstance(record, dict):
            raise SchemaError(f"{path}:{lineno}: item must be a JSON object")
        missing = {"id", "image", "captions", "split"} - set(record)
        if missing:
            raise SchemaError(f"{path}:{lineno}: missing fields {sorted(missing)}")
        if not isinstance(record["id"], int):
            raise SchemaError(f"{path}:{lineno}: id must be an integer")
        captions = record["captions"]
        if not isinstance(captions, list) or len(captions) != CAPTIONS_PER_ITEM:
            raise SchemaError(
                f"{path}:{lineno}: expected exactly {CAPTIONS_PER_ITEM} captions, "
                f"got {len(captions) if isinstance(captions, list) else type(captions).__name__}"
            )
        if not all(isinstance(c, str) for c in captions):
            raise SchemaError(f"{path}:{lineno}: captions must be strings")
        if record["split"] not in SPLITS:
            raise SchemaError(f"{path}:{lineno}: split must be one of {SPLITS}")
        items.append(
            ManifestItem(
                record["id"],
                record["image"],
                tuple(captions),
                record["split"],
                record.get("corruption"),
                record.get("text_aug"),
            )
        )
    ids = [i.id for i in items]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise SchemaError(f"{path}: duplicate ids {dupes[:10]}")
    if check_images:
        offenders = [i.image for i in items if not (root / i.image).exists()]
        if offenders:
            raise ManifestValidationError(
                f"{path}: {len(offenders)} referenced image(s) missing, "
                f"first: {offenders[:5]}",
                offenders,
            )
    manifest = Manifest(tuple(items), provenance, root)
    logger.info("loaded %s: %d items, splits %s", path, len(items), manifest.split_counts())
    return manifest


def save_manifest(manifest: Manifest, path) -> bytes:
    """Serialize a manifest; returns the bytes that were written."""
    data = _manifest_bytes(manifest)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_bytes(data)
    return data


@dataclass
class TestSuite:
    clean: Manifest
    seen: dict[str, Manifest]
    unseen: dict[str, Manifest]
    mixed: dict[str, Manifest]
    text: dict[str, Manifest]
    out_dir: Path
    files_written: int = 0
    files_unchanged: int = 0

    def validate(self) -> "TestSuite":
        if (len(self.seen), len(self.unseen), len(self.mixed), len(self.text)) != (16, 6, 6, 6):
            raise SchemaError(
                f"suite cardinalities must be 16/6/6/6, got "
                f"{len(self.seen)}/{len(self.unseen)}/{len(self.mixed)}/{len(self.text)}"
            )
        clean_ids = self.clean.ids()
        for group in (self.seen, self.unseen, self.mixed, self.text):
            for kind, manifest in group.items():
                if manifest.ids() != clean_ids:
                    raise SchemaError(f"variant {kind!r} ids misaligned with the clean set")
        return self


class _SuiteWriter:
    """Write-if-changed with rollback of files created in this run."""

    def __init__(self):
        self.written = 0
        self.unchanged = 0
        self.created: list[Path] = []

    def write(self, path: Path, data: bytes) -> None:
        if path.exists() and path.read_bytes() == data:
            self.unchanged += 1
            return
        existed = path.exists()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        self.written += 1
        if not existed:
            self.created.append(path)

    def rollback(self) -> None:
        for path in reversed(self.created):
            try:
                path.unlink()
            except OSError:
                pass
        for path in {p.parent for p in self.created}:
            try:
                path.rmdir()
            except OSError:
                pass


def _item_seed(seed: int, kind: str, item_id: int) -> int:
    return derive_subseed(seed, f"{kind}/{item_id}")


def _corrupt_task(args):
    src, kind, severity, item_seed = args
    image = load_image(src)
    out = corrupt(image, CorruptionSpec(kind, severity, item_seed))
    return png_bytes(out)


def generate_test_suite(
    clean: Manifest,
    severity: int,
    seed: int,
    out_dir,
    *,
    workers: int = 1,
    translator=None,
) -> TestSuite:
    """Materialize the 16 seen + 6 unseen + 6 mixed image variants and the
    6 text variants of a clean test manifest.

    Per-item seeds derive from (seed, kind, item id), so regeneration with
    the same arguments is byte-identical regardless of worker count. On
    failure, files created by this run are removed.
    """
    if severity not in (1, 2, 3, 4, 5):
        raise InvalidSpecError(f"severity must be in 1..5, got {severity}")
    if any(item.split != "test" for item in clean.items):
        raise InvalidSpecError("generate_test_suite expects a manifest restricted to split=test")
    if clean.root is None:
        raise InvalidSpecError("clean manifest must carry a root directory")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    writer = _SuiteWriter()
    translator = translator or IdentityTranslator()
    image_kinds = list(SEEN_KINDS) + list(UNSEEN_KINDS) + list(MIXED_KINDS)

    base_provenance = {
        "generator": "robustaug",
        "seed": seed,
        "severity": severity,
        "clean_root": str(clean.root),
        "source": clean.provenance.get("source", ""),
    }

    try:
        clean_out = Manifest(clean.items, {**base_provenance, "variant": "clean"}, clean.root)
        writer.write(out_dir / "clean.jsonl", _manifest_bytes(clean_out))

        tasks = []
        for kind in image_kinds:
            for item in clean.items:
                tasks.append(
                    (
                        str(clean.root / item.image),
                        kind,
                        severity,
                        _item_seed(seed, kind, item.id),
                    )
                )
        if workers > 1:
            with multiprocessing.Pool(workers) as pool:
                payloads = pool.map(_corrupt_task, tasks, chunksize=16)
        else:
            payloads = [_corrupt_task(t) for t in tasks]

        groups: dict[str, dict[str, Manifest]] = {"seen": {}, "unseen": {}, "mixed": {}}
        cursor = 0
        for kind in image_kinds:
            variant_items = []
            for item in clean.items:
                data = payloads[cursor]
                cursor += 1
                rel = Path(kind) / Path(item.image).with_suffix(".png")
                writer.write(out_dir / rel, data)
                variant_items.append(
                    replace(
                        item,
                        image=str(rel),
                        corruption={
                            "kind": kind,
                            "severity": severity,
                            "seed": _item_seed(seed, kind, item.id),
                            "source": item.image,
                        },
                    )
                )
            manifest = Manifest(
                tuple(variant_items), {**base_provenance, "variant": kind}, out_dir
            )
            writer.write(out_dir / f"{kind}.jsonl", _manifest_bytes(manifest))
            if kind in SEEN_KINDS:
                groups["seen"][kind] = manifest
            elif kind in UNSEEN_KINDS:
                groups["unseen"][kind] = manifest
            else:
                groups["mixed"][kind] = manifest

        text_variants: dict[str, Manifest] = {}
        for kind in TEXT_AUG_KINDS:
            variant_items = []
            for item in clean.items:
                base = _item_seed(seed, f"text/{kind}", item.id)
                captions = []
                for c, caption in enumerate(item.captions):
                    out = augment_text(
                        caption,
                        kind,
                        derive_subseed(base, f"caption/{c}"),
                        translator=translator,
                    )
                    captions.append(out.original_text)
                variant_items.append(
                    replace(
                        item,
                        captions=tuple(captions),
                        text_aug={"kind": kind, "seed": base},
                    )
                )
            manifest = Manifest(
                tuple(variant_items),
                {**base_provenance, "variant": f"text_{kind}", "translator": translator.identity},
                clean.root,
            )
            writer.write(out_dir / f"text_{kind}.jsonl", _manifest_bytes(manifest))
            text_variants[kind] = manifest
    except Exception:
        writer.rollback()
        raise

    suite = TestSuite(
        clean_out,
        groups["seen"],
        groups["unseen"],
        groups["mixed"],
        text_variants,
        out_dir,
        writer.written,
        writer.unchanged,
    )
    return suite.validate()


def _manifest_bytes(manifest: Manifest) -> bytes:
    lines = []
    if manifest.provenance:
        lines.append(json.dumps({"manifest_provenance": manifest.provenance}, sort_keys=True))
    for item in manifest.items:
        lines.append(json.dumps(item.to_record(), sort_keys=True))
    return ("\n".join(lines) + "\n").encode("utf-8")


def regenerate_item_image(clean_root, variant_item: ManifestItem) -> bytes:
    """Rebuild one corrupted image from its provenance record alone."""
    if not variant_item.corruption:
        raise InvalidSpecError(f"item {variant_item.id} carries no corruption record")
    record = variant_item.corruption
    image = load_image(Path(clean_root) / record["source"])
    spec = CorruptionSpec(record["kind"], record["severity"], record["seed"])
    return png_bytes(corrupt(image, spec))
