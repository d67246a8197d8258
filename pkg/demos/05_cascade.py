#!/usr/bin/env python3
# Cascaded rewriting: each stage rewrites the previous stage's output.
# File and echo backends stand in for real models, so this runs offline.

import tempfile
from pathlib import Path

from rewrite_eval import Corpus, EchoBackend, FileBackend, Task, render_prompt, to_json
from rewrite_eval.inference import CascadeJob, Stage, default_decoding, default_template, run_cascade
from rewrite_eval.report import MetricReport, evaluate_gec

template = default_template(Task.GRAMMAR)
print(render_prompt(template, "I goes home"))
print(default_decoding(Task.GRAMMAR))

sources = ["He go home .", "She have two cat .", "They was here ."]
refs = ["He goes home .", "She has two cats .", "They were here ."]
first_pass = ["He goes home .", "She have two cats .", "They was here ."]
second_pass = ["He goes home .", "She has two cats .", "They were here ."]

with tempfile.TemporaryDirectory() as tmp:
    backends = {
        "small": FileBackend("small", lines=first_pass),
        "echo": EchoBackend("echo"),
        "large": FileBackend("large", lines=second_pass),
    }
    stages = [Stage(b, template, default_decoding(Task.GRAMMAR)) for b in ("small", "echo", "large")]
    job = CascadeJob(stages, intermediate_dir=Path(tmp) / "stages", max_workers=4)
    result = run_cascade(job, Corpus.from_lists(sources, [refs]), backends)

    print(sorted(p.name for p in (Path(tmp) / "stages").iterdir()))
    print((Path(tmp) / "stages" / "stage1.csv").read_text())

    # metrics after every stage: the echo stage changes nothing
    for stage in result.stages:
        metrics, _ = evaluate_gec(stage.corpus.with_references([(r,) for r in refs]))
        print(stage.index, stage.backend_id, round(metrics["gleu"], 4), round(metrics["m2_f05"], 4))

    final, _ = evaluate_gec(result.corpus.with_references([(r,) for r in refs]))
    print(to_json(MetricReport(Task.GRAMMAR, final)))
