"""Distill the zero-shot teacher into a compact supervised student.

End to end: annotate an unlabelled pool with the mock teacher, export the
silver records as training files, fine-tune a tiny from-scratch encoder on
them with the student trainer, then score the student's prediction dump
with the engine's own evaluation code.  Requires the `glossdom-student`
package (see student/README.md) plus torch and transformers.
"""

import json
import random
import tempfile
from pathlib import Path

import torch

from glossdom import (
    Corpus,
    EngineConfig,
    GlossRecord,
    LabelSpace,
    MockBackend,
    annotate_pool,
    build_report,
    export_training_set,
    load_predictions,
    read_silver,
    write_corpus,
)
from student_trainer import load_manifest, predict_student, train_student

KEYWORDS = {
    "Music": ["music", "melody", "guitar", "chord", "song"],
    "Football": ["football", "striker", "goalkeeper", "penalty", "stadium"],
    "Cooking": ["cooking", "oven", "recipe", "saucepan", "simmer"],
    "Law": ["law", "statute", "verdict", "tribunal", "plaintiff"],
}
FILLER = ["small", "old", "common", "typical", "process", "object", "device", "thing"]
NAMES = list(KEYWORDS)
LABELS = LabelSpace.from_names(NAMES, name="demo")


def make_pool(n, seed, prefix):
    """Unlabelled glosses; each contains its true label's name word."""
    rng = random.Random(seed)
    records = []
    for i in range(n):
        label = NAMES[i % len(NAMES)]
        words = [label.lower()] + rng.sample(KEYWORDS[label][1:], 2) + rng.sample(FILLER, 2)
        rng.shuffle(words)
        records.append(GlossRecord(id=f"{prefix}{i}", gloss="a " + " ".join(words)))
    return Corpus(records=tuple(records), name=f"{prefix}-pool")


def build_tiny_encoder(target_dir):
    """A miniature randomly initialized encoder, so the demo needs no downloads."""
    from tokenizers import Tokenizer
    from tokenizers.models import WordPiece
    from tokenizers.normalizers import BertNormalizer
    from tokenizers.pre_tokenizers import BertPreTokenizer
    from tokenizers.processors import TemplateProcessing
    from transformers import BertConfig, BertModel, BertTokenizerFast
    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()
    words = sorted({w for ws in KEYWORDS.values() for w in ws} | set(FILLER) | {"a"})
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + words
    vocab = {tok: i for i, tok in enumerate(tokens)}
    backend = Tokenizer(WordPiece(vocab, unk_token="[UNK]"))
    backend.normalizer = BertNormalizer(lowercase=True)
    backend.pre_tokenizer = BertPreTokenizer()
    backend.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = BertTokenizerFast(
        tokenizer_object=backend, unk_token="[UNK]", pad_token="[PAD]",
        cls_token="[CLS]", sep_token="[SEP]", mask_token="[MASK]",
    )
    config = BertConfig(
        vocab_size=len(tokens), hidden_size=64, num_hidden_layers=2,
        num_attention_heads=4, intermediate_size=128, max_position_embeddings=128,
    )
    torch.manual_seed(7)
    BertModel(config).save_pretrained(target_dir)
    tokenizer.save_pretrained(target_dir)


def main():
    work = Path(tempfile.mkdtemp(prefix="distill-"))

    # 1. Teacher annotates the unlabelled pool.
    pool = make_pool(200, seed=11, prefix="g")
    job = annotate_pool(
        pool, LABELS, EngineConfig("nli"), MockBackend(), output_path=work / "silver.jsonl"
    )
    print(f"teacher annotated {job.written} glosses ({job.queries_issued} backend queries)")

    # 2. Silver records become training files.
    paths = export_training_set(
        read_silver(work / "silver.jsonl"), out_dir=work / "export",
        split=(0.9, 0.1), seed=13, labels=LABELS,
    )
    print(f"exported train/dev/labels under {paths['train'].parent}")

    # 3. Fine-tune a compact student on the silver files.
    build_tiny_encoder(work / "base")
    manifest = work / "manifest.json"
    manifest.write_text(json.dumps({
        "train": "export/train.jsonl",
        "dev": "export/dev.jsonl",
        "labels": "export/labels.txt",
        "base_model": "base",
        "output_dir": "model",
        "epochs": 8,
        "learning_rate": 5e-3,
        "batch_size": 8,
        "max_length": 64,
        "seed": 13,
    }, indent=2), encoding="utf-8")
    result = train_student(load_manifest(manifest))
    print(f"trained student: {result.metrics}")

    # 4. Score the student against the teacher on fresh glosses.
    heldout = make_pool(50, seed=41, prefix="h")
    teacher_job = annotate_pool(
        heldout, LABELS, EngineConfig("nli"), MockBackend(),
        output_path=work / "heldout_silver.jsonl",
    )
    teacher_labels = {
        rec.id: rec.silver_label for rec in read_silver(work / "heldout_silver.jsonl")
    }
    gold = Corpus(
        records=tuple(
            GlossRecord(id=r.id, gloss=r.gloss, gold_label=teacher_labels[r.id])
            for r in heldout
        ),
        name="heldout",
    )
    write_corpus(gold, work / "heldout.tsv")
    dump = predict_student(result.model_dir, work / "heldout.tsv", work / "student.jsonl")
    report = build_report(load_predictions(dump), gold, LABELS, ks=[1])
    print(f"student vs teacher on {len(gold)} held-out glosses: "
          f"top-1 agreement {report.top_k[1]:.4f}")


if __name__ == "__main__":
    main()
