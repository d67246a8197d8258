#!/usr/bin/env python3
# The same evaluations from the command line, driven here through main() so it runs anywhere.

import tempfile
from pathlib import Path

from rewrite_eval.cli import main

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "src.txt").write_text("He go home .\nShe have two cat .\n")
    (tmp / "ref.txt").write_text("He goes home .\nShe has two cats .\n")
    (tmp / "pred.txt").write_text("He goes home .\nShe has two cat .\n")

    # rewrite-eval eval-gec --source src.txt --refs ref.txt --pred pred.txt
    main(["eval-gec", "--source", str(tmp / "src.txt"), "--refs", str(tmp / "ref.txt"),
          "--pred", str(tmp / "pred.txt")])

    # rewrite-eval eval-simp ... --csv metrics.csv
    main(["eval-simp", "--source", str(tmp / "src.txt"), "--refs", str(tmp / "ref.txt"),
          "--pred", str(tmp / "pred.txt"), "--report", str(tmp / "simp.json"), "--csv", str(tmp / "simp.csv")])
    print((tmp / "simp.csv").read_text())

    # a two-stage cascade from a config file
    (tmp / "stage1.txt").write_text("He goes home .\nShe have two cats .\n")
    (tmp / "stage2.txt").write_text("He goes home .\nShe has two cats .\n")
    (tmp / "cascade.yaml").write_text(
        "task: grammar\n"
        "data: {source: src.txt, refs: [ref.txt]}\n"
        "backends:\n"
        "  first: {type: file, path: stage1.txt}\n"
        "  second: {type: file, path: stage2.txt}\n"
        "stages: [{backend: first}, {backend: second}]\n"
        "output: {intermediate_dir: inter, report: report.json}\n"
    )
    code = main(["cascade", str(tmp / "cascade.yaml")])
    print("exit code", code)
    print((tmp / "report.json").read_text()[:400])

    # exit code 2: line counts disagree
    (tmp / "short.txt").write_text("one line\n")
    print("exit code", main(["eval-gec", "--source", str(tmp / "src.txt"), "--refs", str(tmp / "short.txt"),
                              "--pred", str(tmp / "pred.txt")]))
