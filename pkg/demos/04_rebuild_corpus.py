"""Regenerate the bundled synthetic facade corpus and prove it is
deterministic: two builds, byte-identical files."""

import hashlib
from pathlib import Path

from edgeforge.facades import DEFAULT_SEEDS, generate_corpus

out_dir = Path(__file__).parent / "output"


def digests(directory):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(directory.glob("*.png"))}


first = generate_corpus(out_dir / "corpus_a", seeds=DEFAULT_SEEDS)
second = generate_corpus(out_dir / "corpus_b", seeds=DEFAULT_SEEDS)

a, b = digests(out_dir / "corpus_a"), digests(out_dir / "corpus_b")
for name, digest in a.items():
    tag = "ok" if b[name] == digest else "MISMATCH"
    print(f"{name}  {digest[:16]}...  {tag}")
print(f"\n{len(first)} images per build; builds identical: {a == b}")
