import json
from pathlib import Path

SUITES = Path(__file__).resolve().parent.parent
D = "C:/Users/me/Documents"
P = D + "/paper"


def c(name, command, scenario, expect, assist=None):
  d = {"name": name, "command": command, "scenario": f"scenarios/{scenario}.json", "expect": expect}
  if assist:
    d["assist"] = assist
  return d


cases = [
  c("tidy-documents",
    "rename notes.txt to groceries, rename todo.txt to plan, rename report.docx to q1-report, "
    "delete old_log.txt, copy summary.docx, then paste, drag photo.png to the paper folder, "
    "rename budget.xlsx to budget-2024, open the paper folder, then rename draft.docx to final",
    "explorer",
    [{"file_exists": D + "/groceries.txt"}, {"file_exists": D + "/plan.txt"}, {"file_exists": D + "/q1-report.docx"},
     {"file_absent": D + "/old_log.txt"}, {"file_exists": D + "/summary - Copy.docx"},
     {"file_exists": P + "/photo.png"}, {"file_exists": D + "/budget-2024.xlsx"}, {"file_exists": P + "/final.docx"}]),
  c("news-tour",
    "go to news.example.com, follow the Sports link, follow the Football link, go to google.com, "
    "search for weather, switch to maps.google.com, go to mail.google.com, go to images.google.com, "
    "search for cats, go to news.example.com, then follow the World link",
    "browser",
    [{"url": "news.example.com/world"}]),
  c("portal-errands",
    "switch to Chrome, go to portal.example.com, log in, go to news.example.com, follow the Sports link, "
    "switch to File Explorer, rename notes.txt to portal-notes, delete old_log.txt, "
    "copy report.docx, then paste, then open todo.txt",
    "multi",
    [{"file_exists": D + "/portal-notes.txt"}, {"file_absent": D + "/old_log.txt"},
     {"file_exists": D + "/report - Copy.docx"}, {"title_contains": "todo.txt"}],
    {"3": ["alice", "s3cret"]}),
  c("expense-batch",
    "fill in Amount with 42, type Lunch into the Description field, click Submit, "
    "fill in Amount with 18, type Taxi into the Description field, click Submit, "
    "fill in Amount with 7, type Coffee into the Description field, click Submit, "
    "fill in Amount with 120, type Hotel into the Description field, then click Submit",
    "expenses",
    [{"field": {"window": "Expenses", "name": "Description", "contains": "Hotel"}},
     {"component": {"window": "Expenses", "name": "Submitted"}}]),
  c("notes-session",
    "type Meeting at noon into the Text Editor, save, switch to File Explorer, rename todo.txt to tasks, "
    "rename report.docx to summary-2024, delete old_log.txt, switch to Notepad, "
    "type Call Bob into the Text Editor, save, switch to File Explorer, "
    "drag photo.png to the paper folder, then delete summary.docx",
    "notepad",
    [{"saved": "Notepad"}, {"field": {"window": "Notepad", "name": "Text Editor", "contains": "Call Bob"}},
     {"file_exists": D + "/tasks.txt"}, {"file_absent": D + "/old_log.txt"}, {"file_exists": P + "/photo.png"},
     {"file_absent": D + "/summary.docx"}]),
]
suite = {"name": "long-horizon", "logs": ["logs/basic"], "cases": cases}
(SUITES / "long-horizon.json").write_text(json.dumps(suite, indent=2) + "\n")
