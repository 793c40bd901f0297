import json
from pathlib import Path

from logs import Log

SUITES = Path(__file__).resolve().parent.parent
D = "C:/Users/me/Documents"
FE = ("File Explorer", "Documents - File Explorer", "Local")
WEB = ("Chrome", "Google - Chrome", "Web")
LOG = "ablation.jsonl"

# (command, recorded task summary, events, scenario, expectations)
CASES = [
  ("open the budget workbook", "Open the budget workbook",
   [("mouse-double-click", FE, "FY24_Budget_final.xlsx", {})], "ablation-files",
   [{"title_contains": "FY24_Budget_final.xlsx"}]),
  ("delete the stale draft", "Delete the stale draft",
   [("mouse-click", FE, "draft_v0_OLD.docx", {}), ("key-press", FE, None, {"keys": "ctrl+d"})], "ablation-files",
   [{"file_absent": D + "/draft_v0_OLD.docx"}]),
  ("rename the meeting notes to minutes", "Rename the meeting notes to minutes",
   [("mouse-click", FE, "mtg_2024-03-07.txt", {}), ("key-press", FE, None, {"keys": "f2"}),
    ("key-type", FE, None, {"text": "minutes"}), ("key-press", FE, None, {"keys": "enter"})], "ablation-files",
   [{"file_exists": D + "/minutes.txt"}]),
  ("copy the NDA", "Copy the NDA",
   [("mouse-click", FE, "Contract_ACME_signed.docx", {}), ("key-press", FE, None, {"keys": "ctrl+c"})],
   "ablation-files", [{"clipboard": "Contract_ACME_signed.docx"}]),
  ("open the quarterly review", "Open the quarterly review",
   [("mouse-double-click", FE, "Q3_rev4.docx", {})], "ablation-files", [{"title_contains": "Q3_rev4.docx"}]),
  ("delete the blurry shot", "Delete the blurry shot",
   [("mouse-click", FE, "IMG_0042 (1).png", {}), ("key-press", FE, None, {"keys": "ctrl+d"})], "ablation-files",
   [{"file_absent": D + "/IMG_0042 (1).png"}]),
  ("move the receipt scan into the tax folder", "Drag the receipt scan to tax",
   [("mouse-down", FE, "IMG_5531.png", {}), ("mouse-up", FE, "R-24", {})], "ablation-files",
   [{"file_exists": D + "/R-24/IMG_5531.png"}]),
  ("open the tax return", "Open the tax return",
   [("mouse-double-click", FE, "1040-draft.xlsx", {})], "ablation-files", [{"title_contains": "1040-draft.xlsx"}]),
  ("go to the team wiki", "Go To the team wiki",
   [("key-press", WEB, None, {"keys": "ctrl+l"}), ("key-type", WEB, None, {"text": "wiki.example.com"}),
    ("key-press", WEB, None, {"keys": "enter"})], "ablation-web", [{"url": "wiki.example.com"}]),
  ("go to the expense system", "Go To the expense system",
   [("key-press", WEB, None, {"keys": "ctrl+l"}), ("key-type", WEB, None, {"text": "expenses.example.com"}),
    ("key-press", WEB, None, {"keys": "enter"})], "ablation-web", [{"url": "expenses.example.com"}]),
]


def main():
  log = Log(1_761_000_000_000)
  labels = {}
  cases = []
  for n, (command, summary, events, scenario, expect) in enumerate(CASES):
    if n:
      log.gap()
    window = events[0][1]
    for kind, win, target, extra in events:
      ctype = "Edit" if win is WEB else "ListItem"
      log.add(kind, *win, target, ctype, **extra) if target else log.add(kind, *win, **extra)
    env = "ENV[" + window[2].lower() + "/" + window[0] + "]"
    verb = summary.split(" the ")[0]
    labels[f"{LOG}:s{n}:{window[2].lower()}/{window[0]}"] = {"groups": [{
        "start": 0, "env": env, "act": "ACT[file/" + verb.lower().replace(" ", "-") + "]",
        "title": summary, "description": summary + " in " + window[0] + ".",
        "tasks": [{"start": 0, "summary": summary}]}]}
    cases.append({"name": "ablation-%02d" % (n + 1), "command": command,
                  "scenario": f"scenarios/{scenario}.json", "expect": expect})
  log.write(SUITES / "logs" / "ablation" / LOG)
  (SUITES / "labels.json").write_text(json.dumps(labels, indent=2) + "\n")
  suite = {"name": "ablation-10", "logs": ["logs/ablation"], "labels": "labels.json", "cases": cases}
  (SUITES / "ablation-10.json").write_text(json.dumps(suite, indent=2) + "\n")


main()
