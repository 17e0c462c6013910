#!/usr/bin/env python3
# Copyright 2026 The eqinfo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Assembles an English prose corpus from documentation installed on the host.

Paragraphs are harvested from Markdown/reST/text files, compressed Debian
changelogs and Python docstrings, filtered for prose-like content,
deduplicated, shuffled with a fixed seed and written as a blank-line
delimited corpus split into train/eval files.
"""
import argparse
import gzip
import os
import random
import re

STOPWORDS = {"the", "of", "and", "to", "a", "is", "in", "that", "for", "it"}


def prose_paragraphs(text):
    for para in re.split(r"\n\s*\n", text):
        para = " ".join(para.split())
        if not 200 <= len(para) <= 5000 or not para.isascii():
            continue
        plain = sum(c.isalpha() or c in " .,;:'\"()-" for c in para)
        if plain / len(para) < 0.96:
            continue
        words = para.split()
        if sum(w.lower() in STOPWORDS for w in words) / len(words) < 0.12:
            continue
        yield para


def harvest(roots):
    seen = set()
    for root in roots:
        for dirpath, _, files in sorted(os.walk(root)):
            for name in sorted(files):
                path = os.path.join(dirpath, name)
                try:
                    if name.endswith((".md", ".rst", ".txt")) and os.path.getsize(path) > 2000:
                        text = open(path, errors="ignore").read()
                    elif name.endswith(".gz") and dirpath.startswith("/usr/share/doc"):
                        text = gzip.open(path).read().decode("utf8", "ignore")
                    elif name.endswith(".py") and os.path.getsize(path) > 5000:
                        src = open(path, errors="ignore").read()
                        text = "\n\n".join(re.findall(r'"""(.*?)"""', src, re.S))
                    else:
                        continue
                except OSError:
                    continue
                for para in prose_paragraphs(text):
                    if para not in seen:
                        seen.add(para)
                        yield para


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default="tests/data")
    parser.add_argument("--train-bytes", type=int, default=4_500_000)
    parser.add_argument("--eval-bytes", type=int, default=1_500_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    paras = sorted(harvest(["/usr", "/opt"]))
    random.Random(args.seed).shuffle(paras)

    def take(budget, start):
        out, size, i = [], 0, start
        while i < len(paras) and size < budget:
            out.append(paras[i])
            size += len(paras[i]) + 2
            i += 1
        return out, i

    train, nxt = take(args.train_bytes, 0)
    evals, _ = take(args.eval_bytes, nxt)
    for name, docs in (("desk_train.txt", train), ("desk_eval.txt", evals)):
        with open(os.path.join(args.out_dir, name), "w") as f:
            f.write("\n\n".join(docs))


if __name__ == "__main__":
    main()
