"""Drive the full pipeline through the CLI: analyze, terms, graph.

Writes a synthetic corpus and a config file into a scratch directory,
then runs the subcommands the way a shell user would.

Run with:  python demos/05_cli_pipeline.py
"""

import datetime as dt
import json
import os
import random
import subprocess
import sys
import tempfile

workdir = tempfile.mkdtemp(prefix="contextvol_demo_")
corpus_path = os.path.join(workdir, "corpus.jsonl")
config_path = os.path.join(workdir, "run.conf")
output_dir = os.path.join(workdir, "out")

# --- synthetic corpus: kredit's context shifts halfway through ------------------

rng = random.Random(12)
context_a = ["zins", "bank", "sparen", "geld"]
context_b = ["schuld", "risiko", "krise", "verlust"]
filler = ["haus", "auto", "baum", "stadt", "land", "fluss"]
with open(corpus_path, "w", encoding="utf-8") as f:
    for m in range(12):
        active = context_a if m < 6 else context_b
        for d in range(10):
            sentences = []
            if d < 8:
                sentences.append(" ".join(["kredit"] + rng.sample(active, 2)) + ".")
            for _ in range(2):
                sentences.append(" ".join(rng.sample(filler, rng.randint(2, 4))) + ".")
            record = {
                "id": f"doc{m:02d}_{d:02d}",
                "date": dt.date(2009, 1 + m, 1 + d).isoformat(),
                "text": " ".join(sentences),
            }
            f.write(json.dumps(record) + "\n")

# --- plain-text key-value configuration; flags override these values ------------

with open(config_path, "w", encoding="utf-8") as f:
    f.write(
        f"""# contextvol demo configuration
input = {corpus_path}
format = jsonl
granularity = month
min_doc_freq = 2
measure = llr
top_k = 200
history = 3
output_dir = {output_dir}
workers = 2
"""
    )


def run(*args):
    cmd = [sys.executable, "-m", "contextvol", *args]
    print("\n$ " + " ".join(cmd[2:]))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print(proc.stdout.rstrip() or proc.stderr.rstrip())
    return proc.returncode


run("validate-config", "--config", config_path)
run("analyze", "--config", config_path)
run("terms", "--config", config_path, "--terms", "kredit", "--plot")
run("graph", "--config", config_path, "--word", "kredit", "--slice", "8")

print("\noutput files:")
for name in sorted(os.listdir(output_dir)):
    if os.path.isfile(os.path.join(output_dir, name)):
        print(f"  {name}")

print("\nfirst lines of the global report (terms by full-span volatility):")
with open(os.path.join(output_dir, "top_volatile.csv")) as f:
    for line in f.readlines()[:6]:
        print("  " + line.rstrip())
