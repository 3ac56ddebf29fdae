#!/usr/bin/env python3
import os
import subprocess
import sys

import jinja2

ROOT = os.path.join(os.path.dirname(__file__), "..")

# 1) --help 출력 시도
try:
    help_result = subprocess.run(
        [sys.executable, "-m", "strichartzlab", "--help"],
        capture_output=True,
        text=True,
        check=True,
        cwd=ROOT
    )
    help_text = help_result.stdout.strip()
except subprocess.CalledProcessError as e:
    print(e.stderr or e.stdout)
    print("❌ Failed to get help text from 'strichartzlab':")
    print("❌ Failed to generate README.md from template_README.md")
    sys.exit(1)

# 2) 템플릿 로드
with open(os.path.join(ROOT, "template_README.md"), encoding="utf-8") as f:
    template = jinja2.Template(f.read())

# 3) 렌더링 & 저장
rendered = template.render(usage=help_text)
with open(os.path.join(ROOT, "README.md"), "w", encoding="utf-8") as f:
    f.write(rendered)

print("✅ README.md generated from template_README.md")
