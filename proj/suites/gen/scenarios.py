import json
from pathlib import Path

SUITES = Path(__file__).resolve().parent.parent
D = "C:/Users/me/Documents"
P = D + "/paper"
apps = {
  "File Explorer": {"env_class": "Local", "directory": D, "page_rows": 8,
                    "components": [{"name": "Scroll Bar", "control_type": "ScrollBar"}]},
  "Notepad": {"env_class": "Local", "extensions": [".txt", ".log"],
              "components": [{"name": "File", "control_type": "MenuItem"},
                             {"name": "Edit", "control_type": "MenuItem"},
                             {"name": "Text Editor", "control_type": "Document"}]},
  "Word": {"env_class": "App", "extensions": [".docx"],
           "components": [{"name": "File", "control_type": "MenuItem"},
                          {"name": "Document", "control_type": "Document"}]},
  "Excel": {"env_class": "App", "extensions": [".xlsx"],
            "components": [{"name": "Sheet", "control_type": "Document"},
                           {"name": "Name Box", "control_type": "Edit"}]},
  "Paint": {"env_class": "App", "extensions": [".png"],
            "components": [{"name": "Canvas", "control_type": "Pane"}]},
  "Chrome": {"env_class": "Web", "url": "google.com"},
  "Expenses": {"env_class": "App", "title": "Expense Report",
               "components": [{"name": "Amount", "control_type": "Edit"},
                              {"name": "Description", "control_type": "Edit"},
                              {"name": "Category", "control_type": "ComboBox",
                               "options": ["Travel", "Meals", "Supplies"]},
                              {"name": "Submit", "control_type": "Button"}]},
}
pages = {
  "google.com": {"title": "Google", "components": [
      {"name": "Search", "control_type": "Edit"},
      {"name": "Gmail", "control_type": "Hyperlink", "link": "mail.google.com"},
      {"name": "Images", "control_type": "Hyperlink", "link": "images.google.com"}]},
  "mail.google.com": {"title": "Inbox - Gmail", "components": [
      {"name": "Compose", "control_type": "Button"},
      {"name": "Search mail", "control_type": "Edit"}]},
  "images.google.com": {"title": "Google Images", "components": [{"name": "Search", "control_type": "Edit"}]},
  "news.example.com": {"title": "Daily News", "components": [
      {"name": "Sports", "control_type": "Hyperlink", "link": "news.example.com/sports"},
      {"name": "World", "control_type": "Hyperlink", "link": "news.example.com/world"},
      {"name": "Edition", "control_type": "ComboBox", "options": ["International", "Europe", "Asia"]},
      {"name": "Archive", "control_type": "Hyperlink", "link": "news.example.com/archive", "reveal": 1}]},
  "news.example.com/sports": {"title": "Sports - Daily News", "components": [
      {"name": "Football", "control_type": "Hyperlink", "link": "news.example.com/sports/football"}]},
  "news.example.com/sports/football": {"title": "Football - Daily News", "components": []},
  "news.example.com/world": {"title": "World - Daily News", "components": []},
  "news.example.com/archive": {"title": "Archive - Daily News", "components": []},
  "europe": {"title": "Europe Edition - Daily News", "components": []},
  "maps.google.com": {"title": "Google Maps", "components": [{"name": "Search Maps", "control_type": "Edit"}]},
  "portal.example.com": {"title": "Employee Portal", "components": [
      {"name": "Login", "control_type": "Button"},
      {"name": "Help", "control_type": "Hyperlink", "link": "portal.example.com/help"}]},
  "portal.example.com/help": {"title": "Help - Employee Portal", "components": []},
  "wiki.example.com": {"title": "Team Wiki", "components": [{"name": "Search wiki", "control_type": "Edit"}]},
  "expenses.example.com": {"title": "Expense System", "components": [{"name": "New claim", "control_type": "Button"}]},
}
files = [
  {"dir": D, "name": "paper", "folder": True},
  {"dir": D, "name": "archive", "folder": True},
  {"dir": D, "name": "budget.xlsx", "content": "Q1,Q2"},
  {"dir": D, "name": "notes.txt", "content": "buy milk"},
  {"dir": D, "name": "old_log.txt", "content": "stale"},
  {"dir": D, "name": "photo.png"},
  {"dir": D, "name": "report.docx", "content": "Quarterly report"},
  {"dir": D, "name": "summary.docx"},
  {"dir": D, "name": "todo.txt", "content": "1. write"},
  {"dir": D, "name": "zeta_archive.txt", "content": "old"},
  {"dir": P, "name": "draft.docx", "content": "Attention"},
  {"dir": P, "name": "refs.txt"},
  {"dir": P, "name": "figures", "folder": True},
  {"dir": P + "/figures", "name": "fig1.png"},
  {"dir": P + "/figures", "name": "fig2.png"},
]
ablation_files = [f for f in files if f["name"] in ("notes.txt", "budget.xlsx", "photo.png")] + [
  {"dir": D, "name": "FY24_Budget_final.xlsx", "content": "FY24"},
  {"dir": D, "name": "draft_v0_OLD.docx"},
  {"dir": D, "name": "mtg_2024-03-07.txt", "content": "agenda"},
  {"dir": D, "name": "Contract_ACME_signed.docx"},
  {"dir": D, "name": "Q3_rev4.docx"},
  {"dir": D, "name": "IMG_0042 (1).png"},
  {"dir": D, "name": "IMG_5531.png"},
  {"dir": D, "name": "1040-draft.xlsx"},
  {"dir": D, "name": "R-24", "folder": True},
]
login_triggers = [
  {"when": {"verb": "click", "target": "Login", "title": "Employee Portal"},
   "then": [{"op": "add_components", "components": [
       {"name": "User ID", "control_type": "Edit"},
       {"name": "Password", "control_type": "Edit"}]}]},
  {"when": {"verb": "press", "keys": "enter", "title": "Employee Portal"},
   "then": [{"op": "remove_component", "name": "Login"},
            {"op": "add_components", "components": [{"name": "Signed in", "control_type": "Text"},
                                                    {"name": "Logout", "control_type": "Button"}]}]},
]
form_triggers = [
  {"when": {"verb": "click", "target": "Submit", "app": "Expenses"},
   "then": [{"op": "add_components", "components": [{"name": "Submitted", "control_type": "Text"}]}]},
]
def scen(seed, windows, clipboard="", triggers=(), files=files):
  return {"seed": seed, "apps": apps, "pages": pages, "files": files, "windows": windows,
          "clipboard": clipboard, "triggers": list(triggers)}

out = {
  "explorer": scen(1, [{"app": "File Explorer"}]),
  "paper": scen(2, [{"app": "File Explorer", "directory": P, "title": "paper - File Explorer"}]),
  "notepad": scen(3, [{"app": "Notepad", "title": "notes.txt - Notepad", "focus": "Text Editor",
                       "components": [{"name": "File", "control_type": "MenuItem"},
                                      {"name": "Edit", "control_type": "MenuItem"},
                                      {"name": "Text Editor", "control_type": "Document", "value": "hello"}]},
                      {"app": "File Explorer"}], clipboard=" world"),
  "browser": scen(4, [{"app": "Chrome", "tabs": ["news.example.com", "google.com"]}]),
  "portal": scen(5, [{"app": "Chrome", "url": "portal.example.com"}], triggers=login_triggers),
  "expenses": scen(6, [{"app": "Expenses"}], triggers=form_triggers),
  "multi": scen(7, [{"app": "File Explorer"},
                    {"app": "Notepad", "title": "todo.txt - Notepad"},
                    {"app": "Chrome", "url": "news.example.com"}], triggers=login_triggers + form_triggers),
  "empty": scen(8, []),
  "news": scen(9, [{"app": "Chrome", "url": "news.example.com"}]),
  "ablation-files": scen(10, [{"app": "File Explorer"}], files=ablation_files),
  "ablation-web": scen(11, [{"app": "Chrome"}, {"app": "File Explorer"}], files=ablation_files),
}
for name, sc in out.items():
  with (SUITES / "scenarios" / f"{name}.json").open("w") as f:
    json.dump(sc, f, indent=2)
    f.write("\n")
