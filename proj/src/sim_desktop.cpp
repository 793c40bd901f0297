#include "log2plan/sim_desktop.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "log2plan/dictionary.hpp"
#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

constexpr int kUnplaced = -1;

bool editable_type(std::string_view type) { return type == "Edit" || type == "Document" || type == "ComboBox"; }

std::string norm_url(std::string_view url) {
  std::string u = text::lower(text::trim(url));
  for (std::string_view p : {"https://", "http://"}) {
    if (u.rfind(p, 0) == 0) u = u.substr(p.size());
  }
  if (u.rfind("www.", 0) == 0) u = u.substr(4);
  while (!u.empty() && u.back() == '/') u.pop_back();
  return u;
}

std::string extension(std::string_view name) {
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  return text::lower(name.substr(dot));
}

std::string stem(std::string_view name) {
  const auto ext = extension(name);
  return std::string(name.substr(0, name.size() - ext.size()));
}

std::string basename(std::string_view path) {
  const auto slash = path.rfind('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

bool matches_window(const SimWindow& w, std::string_view name) {
  const auto n = text::trim(name);
  if (n.empty()) return false;
  if (text::iequals(w.app, n) || text::icontains(w.title, n)) return true;
  return w.app.size() >= 3 && text::icontains(n, w.app);
}

ActionResult ok(bool changed = false) { return {true, changed, {}}; }
ActionResult failure(std::string detail) { return {false, false, std::move(detail)}; }

EnvClass env_from(const nlohmann::json& j, std::string_view key, EnvClass def) {
  if (!j.contains(key)) return def;
  const auto e = parse_env_class(j.at(key).get<std::string>());
  if (!e) throw Error(ErrorCode::schema, "unknown env_class " + j.at(key).dump());
  return *e;
}

std::vector<SimComponent> components_from(const nlohmann::json& j) {
  return j.is_array() ? j.get<std::vector<SimComponent>>() : std::vector<SimComponent>{};
}

// Mutable view of the desktop used by apply(); windows are addressed by id
// because opening or closing windows reallocates the z-order vector.
class Engine {
 public:
  explicit Engine(SimState& s) : s_(s) {}

  SimWindow* front() { return s_.windows.empty() ? nullptr : &s_.windows.front(); }

  SimWindow* by_id(int id) {
    for (auto& w : s_.windows) {
      if (w.id == id) return &w;
    }
    return nullptr;
  }

  static bool is_overlay(const SimWindow& w) { return w.kind != WindowKind::normal; }
  static bool owned_overlay(const SimWindow& w) {
    return w.kind == WindowKind::context_menu || w.kind == WindowKind::dropdown || w.kind == WindowKind::menubar;
  }

  // Normal window under any overlays.
  SimWindow* base() {
    for (auto& w : s_.windows) {
      if (!is_overlay(w)) return &w;
    }
    return nullptr;
  }

  std::vector<SimComponent> all_components(const SimWindow& w) const {
    std::vector<SimComponent> out = w.components;
    if (w.directory) {
      const int step = std::max(1, (2 * w.page_rows + 2) / 3);
      int row = 0;
      for (const auto& f : s_.files) {
        if (f.dir != *w.directory) continue;
        SimComponent c;
        c.name = f.name;
        c.control_type = "ListItem";
        c.position = {240, 120 + 28 * (row % std::max(1, w.page_rows))};
        c.reveal = row < w.page_rows ? 0 : (row - w.page_rows) / step + 1;
        out.push_back(std::move(c));
        ++row;
      }
    }
    return out;
  }

  std::vector<SimComponent> visible(const SimWindow& w) const {
    std::vector<SimComponent> out;
    for (auto& c : all_components(w)) {
      if (c.reveal <= w.scroll) out.push_back(std::move(c));
    }
    return out;
  }

  // Components the user can reach from the front window: an owned overlay
  // floats over its owner, so both are reachable.
  std::vector<std::pair<int, SimComponent>> reachable() {
    std::vector<std::pair<int, SimComponent>> out;
    SimWindow* f = front();
    if (!f) return out;
    for (auto& c : visible(*f)) out.emplace_back(f->id, std::move(c));
    if (owned_overlay(*f)) {
      if (SimWindow* o = by_id(f->owner)) {
        for (auto& c : visible(*o)) out.emplace_back(o->id, std::move(c));
      }
    }
    return out;
  }

  std::optional<std::pair<int, SimComponent>> find(const Component& target) {
    const auto all = reachable();
    const std::pair<int, SimComponent>* loose = nullptr;
    for (const auto& entry : all) {
      const auto& c = entry.second;
      if (!text::iequals(c.name, target.name)) continue;
      if (target.control_type.empty() || c.control_type == target.control_type) return entry;
      if (!loose) loose = &entry;
    }
    if (loose) return *loose;
    // Fallback labels such as "ID" name a field like "User ID".
    const std::pair<int, SimComponent>* partial = nullptr;
    int hits = 0;
    for (const auto& entry : all) {
      const auto& c = entry.second;
      const auto toks = text::tokens(c.name);
      const auto want = text::normalize(target.name);
      if (want.empty()) continue;
      const bool token_hit = std::find(toks.begin(), toks.end(), want) != toks.end() ||
                             text::icontains(text::normalize(c.name), want);
      const bool type_ok = target.control_type.empty() || c.control_type == target.control_type;
      if (token_hit && type_ok) {
        if (!partial) partial = &entry;
        ++hits;
      }
    }
    if (partial && hits == 1) return *partial;
    return std::nullopt;
  }

  SimComponent* static_component(SimWindow& w, std::string_view name) {
    for (auto& c : w.components) {
      if (text::iequals(c.name, name)) return &c;
    }
    return nullptr;
  }

  SimFile* file_in(const SimWindow& w, std::string_view name) {
    if (!w.directory) return nullptr;
    for (auto& f : s_.files) {
      if (f.dir == *w.directory && text::iequals(f.name, name)) return &f;
    }
    return nullptr;
  }

  void ensure_chrome(SimWindow& w) {
    if (w.kind != WindowKind::normal) return;
    if (!static_component(w, "Close")) {
      SimComponent c;
      c.name = "Close";
      c.control_type = "Button";
      w.components.insert(w.components.begin(), c);
    }
    if (w.browser() && !static_component(w, "Address Bar")) {
      SimComponent c;
      c.name = "Address Bar";
      c.control_type = "Edit";
      c.editable = true;
      w.components.insert(w.components.begin() + 1, c);
    }
    if (w.directory && !static_component(w, "Search")) {
      SimComponent c;
      c.name = "Search";
      c.control_type = "Edit";
      c.editable = true;
      w.components.push_back(c);
    }
    place(w);
  }

  void place(SimWindow& w) {
    int row = 0;
    for (auto& c : w.components) {
      if (c.position.x == kUnplaced || c.position.y == kUnplaced) {
        c.position = c.name == "Close" && c.control_type == "Button" ? Point{1880, 8} : Point{40, 60 + 32 * row};
      }
      ++row;
    }
  }

  std::vector<SimComponent> chrome_components(const SimWindow& w) {
    std::vector<SimComponent> out;
    if (auto it = s_.apps.find(w.app); it != s_.apps.end()) out = it->second.components;
    return out;
  }

  void dismiss_overlays() {
    s_.windows.erase(std::remove_if(s_.windows.begin(), s_.windows.end(), [](const SimWindow& w) { return is_overlay(w); }),
                     s_.windows.end());
  }

  void close_window(int id) {
    s_.windows.erase(std::remove_if(s_.windows.begin(), s_.windows.end(),
                                    [&](const SimWindow& w) { return w.id == id || w.owner == id; }),
                     s_.windows.end());
  }

  void raise(int id) {
    auto it = std::find_if(s_.windows.begin(), s_.windows.end(), [&](const SimWindow& w) { return w.id == id; });
    if (it == s_.windows.end() || it == s_.windows.begin()) return;
    SimWindow w = std::move(*it);
    s_.windows.erase(it);
    s_.windows.insert(s_.windows.begin(), std::move(w));
  }

  int push_front(SimWindow w) {
    w.id = s_.next_id++;
    ensure_chrome(w);
    s_.windows.insert(s_.windows.begin(), std::move(w));
    return s_.windows.front().id;
  }

  void navigate(int id, std::string_view url) {
    SimWindow* w = by_id(id);
    if (!w) return;
    const std::string key = norm_url(url);
    if (w->tabs.empty()) w->tabs.push_back({});
    w->active_tab = std::clamp(w->active_tab, 0, static_cast<int>(w->tabs.size()) - 1);
    auto& tab = w->tabs[w->active_tab];
    tab.url = key;
    const auto page = s_.pages.find(key);
    tab.title = page != s_.pages.end() ? page->second.title : key;
    show_tab(*w);
  }

  void show_tab(SimWindow& w) {
    const auto& tab = w.tabs[w.active_tab];
    w.components = chrome_components(w);
    if (auto page = s_.pages.find(tab.url); page != s_.pages.end()) {
      for (const auto& c : page->second.components) w.components.push_back(c);
    }
    ensure_chrome(w);
    if (SimComponent* bar = static_component(w, "Address Bar")) bar->value = tab.url;
    w.title = tab.title + " - " + w.app;
    w.scroll = 0;
    w.focus.clear();
  }

  const AppTemplate* app_template(std::string_view name, std::string* key) {
    for (const auto& [k, t] : s_.apps) {
      if (text::iequals(k, name)) {
        *key = k;
        return &t;
      }
    }
    return nullptr;
  }

  int open_app(const std::string& key, const AppTemplate& t) {
    dismiss_overlays();
    SimWindow w;
    w.app = key;
    w.title = t.title.empty() ? key : t.title;
    w.env_class = t.env_class;
    w.components = t.components;
    w.directory = t.directory;
    w.page_rows = t.page_rows;
    if (w.directory && t.title.empty()) w.title = basename(*w.directory) + " - " + key;
    const int id = push_front(std::move(w));
    if (t.url) {
      by_id(id)->tabs.push_back({});
      navigate(id, *t.url);
    }
    return id;
  }

  std::optional<int> open_file(const SimFile& f) {
    if (f.folder) {
      std::string key;
      const AppTemplate* t = app_template("File Explorer", &key);
      AppTemplate tmpl = t ? *t : AppTemplate{};
      if (!t) key = "File Explorer";
      tmpl.directory = f.path();
      tmpl.title = f.name + " - " + key;
      tmpl.env_class = EnvClass::Local;
      return open_app(key, tmpl);
    }
    const auto ext = extension(f.name);
    for (const auto& [key, t] : s_.apps) {
      if (std::find(t.extensions.begin(), t.extensions.end(), ext) == t.extensions.end()) continue;
      AppTemplate tmpl = t;
      tmpl.title = f.name + " - " + key;
      const int id = open_app(key, tmpl);
      SimWindow* w = by_id(id);
      for (auto& c : w->components) {
        if (c.control_type == "Document" || c.control_type == "Edit") {
          c.value = f.content;
          break;
        }
      }
      return id;
    }
    return std::nullopt;
  }

  // Start-menu and search-box resolution: apps first, then files and folders.
  std::optional<int> open_target(std::string_view name) {
    const auto n = text::trim(name);
    if (n.empty()) return std::nullopt;
    std::string key;
    if (const AppTemplate* t = app_template(n, &key)) return open_app(key, *t);
    for (const auto& [k, t] : s_.apps) {
      if (text::icontains(k, n) || (k.size() >= 4 && text::icontains(n, k))) return open_app(k, t);
    }
    for (const auto& f : s_.files) {
      if (text::iequals(f.name, n) || text::iequals(stem(f.name), n) || text::iequals(f.path(), n)) {
        SimFile copy = f;
        return open_file(copy);
      }
    }
    return std::nullopt;
  }

  // ---- item operations shared by keys, clicks and context menus ----

  ActionResult activate_item(int wid, const std::string& name) {
    SimWindow* w = by_id(wid);
    if (!w) return failure("window vanished");
    if (SimFile* f = file_in(*w, name)) {
      if (f->folder) {
        w->directory = f->path();
        w->title = f->name + " - " + w->app;
        w->scroll = 0;
        w->focus.clear();
        return ok(true);
      }
      SimFile copy = *f;
      if (!open_file(copy)) return failure("no application opens '" + copy.name + "'");
      return ok(true);
    }
    SimComponent* c = static_component(*w, name);
    if (!c) return failure("no component matches '" + name + "'");
    if (c->control_type == "Button" && c->name == "Close") {
      close_window(wid);
      return ok(true);
    }
    if (!c->link.empty()) {
      navigate(wid, c->link);
      return ok(true);
    }
    const std::string target = !c->opens.empty() ? c->opens : c->name;
    if (!c->opens.empty() || c->control_type == "Icon") {
      if (!open_target(target)) return failure("nothing named '" + target + "' to open");
      return ok(true);
    }
    w->focus = c->name;
    return ok();
  }

  ActionResult copy_selection(SimWindow& w) {
    if (w.focus.empty()) return failure("nothing selected to copy");
    if (SimFile* f = file_in(w, w.focus)) {
      s_.clipboard = f->name;
      s_.clipboard_is_item = true;
      s_.clipboard_dir = f->dir;
      return ok();
    }
    const SimComponent* c = static_component(w, w.focus);
    if (!c) return failure("nothing selected to copy");
    s_.clipboard = c->editable ? c->value : c->name;
    s_.clipboard_is_item = false;
    return ok();
  }

  ActionResult paste(SimWindow& w) {
    if (s_.clipboard.empty()) return failure("clipboard is empty");
    if (SimComponent* c = static_component(w, w.focus); c && c->editable) {
      c->value += s_.clipboard;
      w.saved = false;
      return ok();
    }
    if (w.directory && s_.clipboard_is_item) {
      const SimFile* src = nullptr;
      for (const auto& f : s_.files) {
        if (f.dir == s_.clipboard_dir && f.name == s_.clipboard) src = &f;
      }
      if (!src) return failure("copied file '" + s_.clipboard + "' no longer exists");
      SimFile copy = *src;
      copy.dir = *w.directory;
      while (file_in(w, copy.name)) copy.name = stem(copy.name) + " - Copy" + extension(copy.name);
      s_.files.push_back(std::move(copy));
      return ok(true);
    }
    return failure("nowhere to paste");
  }

  ActionResult delete_selection(SimWindow& w) {
    if (w.focus.empty()) return failure("nothing selected to delete");
    if (SimFile* f = file_in(w, w.focus)) {
      const std::string path = f->path();
      s_.files.erase(std::remove_if(s_.files.begin(), s_.files.end(),
                                    [&](const SimFile& x) { return x.path() == path || x.dir.rfind(path + "/", 0) == 0; }),
                     s_.files.end());
      w.focus.clear();
      return ok(true);
    }
    auto it = std::find_if(w.components.begin(), w.components.end(),
                           [&](const SimComponent& c) { return text::iequals(c.name, w.focus); });
    if (it == w.components.end() || it->editable || it->name == "Close") return failure("nothing selected to delete");
    w.components.erase(it);
    w.focus.clear();
    return ok(true);
  }

  ActionResult begin_rename(SimWindow& w, const std::string& name) {
    if (name.empty()) return failure("nothing selected to rename");
    const SimComponent* c = static_component(w, name);
    if (!file_in(w, name) && (!c || c->editable)) return failure("'" + name + "' cannot be renamed");
    w.renaming = file_in(w, name) ? file_in(w, name)->name : c->name;
    w.buffer.clear();
    return ok();
  }

  ActionResult commit_rename(SimWindow& w) {
    std::string next = text::trim(w.buffer);
    const std::string old = w.renaming;
    w.renaming.clear();
    w.buffer.clear();
    if (next.empty()) return failure("empty name for '" + old + "'");
    if (SimFile* f = file_in(w, old)) {
      if (!f->folder && extension(next).empty()) next += extension(f->name);
      if (!text::iequals(next, old) && file_in(w, next)) return failure("'" + next + "' already exists");
      const std::string old_path = f->path();
      f->name = next;
      const std::string new_path = f->path();
      for (auto& x : s_.files) {
        if (x.dir == old_path) x.dir = new_path;
        else if (x.dir.rfind(old_path + "/", 0) == 0) x.dir = new_path + x.dir.substr(old_path.size());
      }
      w.focus = next;
      return ok(true);
    }
    if (SimComponent* c = static_component(w, old)) {
      if (!text::iequals(next, old) && static_component(w, next)) return failure("'" + next + "' already exists");
      c->name = next;
      w.focus = next;
      return ok(true);
    }
    return failure("'" + old + "' no longer exists");
  }

  // ---- overlays ----

  int open_overlay(WindowKind kind, const SimWindow* owner, std::string title, std::vector<std::string> items,
                   std::string item_type) {
    SimWindow o;
    o.kind = kind;
    o.app = owner ? owner->app : (kind == WindowKind::task_switcher ? "Task View" : "Start");
    o.title = std::move(title);
    o.env_class = owner ? owner->env_class : EnvClass::Local;
    o.owner = owner ? owner->id : -1;
    int row = 0;
    for (auto& item : items) {
      SimComponent c;
      c.name = std::move(item);
      c.control_type = item_type;
      c.position = {owner ? 300 : 20, 200 + 28 * row++};
      o.components.push_back(std::move(c));
    }
    return push_front(std::move(o));
  }

  ActionResult choose(SimWindow& overlay, int index) {
    if (index < 0 || index >= static_cast<int>(overlay.components.size())) return failure("nothing highlighted");
    const std::string item = overlay.components[index].name;
    const WindowKind kind = overlay.kind;
    const int owner = overlay.owner;
    const std::string subject = overlay.subject;
    const std::vector<std::string> ids = overlay.components[index].options;
    close_window(overlay.id);
    raise_owner(owner);

    switch (kind) {
      case WindowKind::start_menu:
        if (!open_target(item)) return failure("nothing named '" + item + "' to open");
        return ok(true);
      case WindowKind::task_switcher:
        if (!ids.empty()) raise(std::stoi(ids.front()));
        return ok(true);
      case WindowKind::dropdown: {
        SimWindow* w = by_id(owner);
        if (!w) return failure("window vanished");
        if (SimComponent* c = static_component(*w, subject)) c->value = item;
        w->focus = subject;
        if (w->browser()) {
          for (const auto& [url, page] : s_.pages) {
            if (text::iequals(page.title, item) || text::iequals(url, norm_url(item))) {
              navigate(owner, url);
              break;
            }
          }
        }
        return ok(true);
      }
      case WindowKind::menubar: {
        SimWindow* w = by_id(owner);
        if (!w) return failure("window vanished");
        return activate_item(owner, item);
      }
      case WindowKind::context_menu: {
        SimWindow* w = by_id(owner);
        if (!w) return failure("window vanished");
        w->focus = subject;
        if (text::iequals(item, "Open")) return activate_item(owner, subject);
        if (text::iequals(item, "Copy")) return copy_selection(*w);
        if (text::iequals(item, "Paste")) return paste(*w);
        if (text::iequals(item, "Delete")) return delete_selection(*w);
        if (text::iequals(item, "Rename")) return begin_rename(*w, subject);
        if (static_component(*w, item)) return activate_item(owner, item);
        return ok();
      }
      case WindowKind::normal:
        break;
    }
    return ok();
  }

  void raise_owner(int owner) {
    if (owner >= 0) raise(owner);
  }

  // ---- verbs ----

  ActionResult click(const LowLevelAction& a, bool twice) {
    auto hit = find(*a.target);
    if (!hit) return failure("no component matches '" + a.target->name + "'");
    auto& [wid, comp] = *hit;
    SimWindow* f = front();
    if (f->id == wid && is_overlay(*f)) {
      if (f->kind == WindowKind::start_menu && comp.control_type == "Edit") {
        f->focus = comp.name;
        return ok();
      }
      const auto it = std::find_if(f->components.begin(), f->components.end(),
                                   [&](const SimComponent& c) { return c.name == comp.name; });
      return choose(*f, static_cast<int>(it - f->components.begin()));
    }
    if (f->id != wid) dismiss_overlays();
    SimWindow* w = by_id(wid);
    if (!w->renaming.empty() && !text::iequals(w->renaming, comp.name)) {
      w->renaming.clear();
      w->buffer.clear();
    }
    w->focus = comp.name;
    if (twice) return activate_item(wid, comp.name);
    if (comp.control_type == "Button" && comp.name == "Close") {
      close_window(wid);
      return ok(true);
    }
    if (!comp.link.empty()) {
      navigate(wid, comp.link);
      return ok(true);
    }
    if (comp.control_type == "ComboBox" && !comp.options.empty()) {
      const int id = open_overlay(WindowKind::dropdown, w, comp.name, comp.options, "ListItem");
      by_id(id)->subject = comp.name;
      return ok(true);
    }
    if (!comp.opens.empty() && comp.control_type != "ListItem" && comp.control_type != "Icon") {
      if (!open_target(comp.opens)) return failure("nothing named '" + comp.opens + "' to open");
      return ok(true);
    }
    return ok();
  }

  ActionResult right_click(const LowLevelAction& a) {
    auto hit = find(*a.target);
    if (!hit) return failure("no component matches '" + a.target->name + "'");
    auto& [wid, comp] = *hit;
    dismiss_overlays();
    SimWindow* w = by_id(wid);
    if (!w) return failure("no component matches '" + a.target->name + "'");
    w->focus = comp.name;
    std::vector<std::string> items = comp.options;
    if (items.empty()) items = {"Open", "Copy", "Paste", "Delete", "Rename"};
    const int id = open_overlay(WindowKind::context_menu, w, "Context Menu", items, "MenuItem");
    by_id(id)->subject = comp.name;
    return ok(true);
  }

  ActionResult type(const LowLevelAction& a) {
    SimWindow* f = front();
    if (!f) return failure("no focused window");
    if (f->kind == WindowKind::dropdown) {
      const int owner = f->owner;
      close_window(f->id);
      raise_owner(owner);
      f = front();
    }
    if (!f->renaming.empty()) {
      f->buffer += *a.text;
      return ok();
    }
    SimComponent* c = static_component(*f, f->focus);
    if (!c || !c->editable) return failure("no editable component has focus");
    c->value += *a.text;
    f->saved = false;
    return ok();
  }

  ActionResult enter() {
    SimWindow* f = front();
    if (!f) return failure("no focused window");
    if (!f->renaming.empty()) return commit_rename(*f);
    switch (f->kind) {
      case WindowKind::start_menu: {
        const SimComponent* search = static_component(*f, "Search");
        const std::string query = search ? search->value : std::string{};
        close_window(f->id);
        if (!open_target(query)) return failure("nothing named '" + query + "' to open");
        return ok(true);
      }
      case WindowKind::task_switcher:
      case WindowKind::dropdown:
      case WindowKind::menubar:
      case WindowKind::context_menu:
        return choose(*f, f->highlight);
      case WindowKind::normal:
        break;
    }
    SimComponent* c = static_component(*f, f->focus);
    if (!c) return ok();
    if (f->browser() && c->name == "Address Bar") {
      if (text::trim(c->value).empty()) return failure("address bar is empty");
      navigate(f->id, c->value);
      return ok(true);
    }
    if (c->editable && text::icontains(c->name, "search") && !f->browser()) {
      const std::string query = c->value;
      if (open_target(query)) return ok(true);
    }
    return ok();
  }

  ActionResult move_highlight(SimWindow& f, int delta) {
    const int n = static_cast<int>(f.components.size());
    if (n == 0) return ok();
    if (f.kind == WindowKind::task_switcher) {
      f.highlight = ((f.highlight + delta) % n + n) % n;
    } else {
      f.highlight = std::clamp(f.highlight + delta, 0, n - 1);
    }
    return ok();
  }

  ActionResult press(const LowLevelAction& a) {
    const std::string k = normalize_chord(*a.keys);
    SimWindow* f = front();

    if (k == "win") {
      dismiss_overlays();
      std::vector<std::string> apps;
      for (const auto& [name, t] : s_.apps) apps.push_back(name);
      const int id = open_overlay(WindowKind::start_menu, nullptr, "Start", apps, "ListItem");
      SimWindow* m = by_id(id);
      SimComponent search;
      search.name = "Search";
      search.control_type = "Edit";
      search.editable = true;
      search.position = {20, 160};
      m->components.insert(m->components.begin(), search);
      m->focus = "Search";
      return ok(true);
    }
    if (k == "win+tab") {
      dismiss_overlays();
      std::vector<std::string> titles;
      std::vector<int> ids;
      for (const auto& w : s_.windows) {
        titles.push_back(w.title);
        ids.push_back(w.id);
      }
      const int id = open_overlay(WindowKind::task_switcher, nullptr, "Task View", titles, "ListItem");
      SimWindow* sw = by_id(id);
      for (std::size_t i = 0; i < ids.size(); ++i) sw->components[i].options = {std::to_string(ids[i])};
      sw->highlight = 0;
      return ok(true);
    }
    if (!f) return failure("no focused window");

    if (k == "enter") return enter();
    if (k == "esc") {
      if (is_overlay(*f)) {
        const int owner = f->owner;
        close_window(f->id);
        raise_owner(owner);
        return ok(true);
      }
      f->renaming.clear();
      f->buffer.clear();
      return ok();
    }
    if (k == "up" || k == "down" || k == "left" || k == "right") {
      if (is_overlay(*f) && f->kind != WindowKind::start_menu) {
        return move_highlight(*f, k == "down" || k == "right" ? 1 : -1);
      }
      return ok();
    }
    if (is_overlay(*f) && k != "alt+f4") {
      const int owner = f->owner;
      close_window(f->id);
      raise_owner(owner);
      f = front();
      if (!f) return failure("no focused window");
    }

    if (k == "tab") {
      const auto comps = visible(*f);
      std::vector<std::string> fields;
      for (const auto& c : comps) {
        if (c.editable) fields.push_back(c.name);
      }
      if (fields.empty()) return ok();
      auto it = std::find_if(fields.begin(), fields.end(), [&](const std::string& n) { return text::iequals(n, f->focus); });
      f->focus = it == fields.end() || std::next(it) == fields.end() ? fields.front() : *std::next(it);
      return ok();
    }
    if (k == "ctrl+s") {
      f->saved = true;
      if (!f->title.empty() && f->title.front() == '*') f->title.erase(0, 1);
      return ok();
    }
    if (k == "ctrl+c") return copy_selection(*f);
    if (k == "ctrl+v") return paste(*f);
    if (k == "ctrl+d") return delete_selection(*f);
    if (k == "f2") return begin_rename(*f, f->focus);
    if (k == "alt+f4") {
      const int owner = f->owner;
      close_window(f->id);
      raise_owner(owner);
      return ok(true);
    }
    if (k == "alt+esc") {
      SimWindow w = std::move(s_.windows.front());
      s_.windows.erase(s_.windows.begin());
      s_.windows.push_back(std::move(w));
      return ok(true);
    }
    if (k == "ctrl+t") {
      if (!f->browser()) return failure("ctrl+t needs a browser window");
      f->tabs.push_back({"newtab", "New Tab"});
      f->active_tab = static_cast<int>(f->tabs.size()) - 1;
      show_tab(*f);
      SimComponent* bar = static_component(*f, "Address Bar");
      bar->value.clear();
      f->focus = bar->name;
      return ok(true);
    }
    if (k == "ctrl+l") {
      if (!f->browser()) return failure("ctrl+l needs a browser window");
      SimComponent* bar = static_component(*f, "Address Bar");
      bar->value.clear();
      f->focus = bar->name;
      return ok();
    }
    if (k == "ctrl+shift+tab") {
      if (!f->browser() || f->tabs.size() < 2) return failure("no other tab to switch to");
      const int n = static_cast<int>(f->tabs.size());
      f->active_tab = (f->active_tab - 1 + n) % n;
      show_tab(*f);
      return ok(true);
    }
    if (k == "alt") {
      std::vector<std::string> items;
      for (const auto& c : visible(*f)) {
        if (c.control_type == "MenuItem") items.push_back(c.name);
      }
      if (items.empty()) return failure("window '" + f->app + "' has no menu bar");
      open_overlay(WindowKind::menubar, f, "Menu Bar", items, "MenuItem");
      return ok(true);
    }
    return failure("unknown chord '" + k + "'");
  }

  ActionResult scroll(const LowLevelAction& a) {
    SimWindow* b = base();
    if (!b) return failure("no focused window");
    if (!a.target->name.empty() && !matches_window(*b, a.target->name)) {
      return failure("window '" + a.target->name + "' not focused");
    }
    dismiss_overlays();
    front()->scroll += 1;
    return ok(true);
  }

  ActionResult drag(const LowLevelAction& a) {
    auto hit = find(*a.target);
    if (!hit) return failure("no component matches '" + a.target->name + "'");
    auto& [wid, comp] = *hit;
    SimWindow* w = by_id(wid);
    if (a.amount) {
      if (comp.control_type != "ScrollBar") return failure("'" + comp.name + "' is not a scroll bar");
      w->scroll += 1;
      return ok(true);
    }
    if (!a.destination) return failure("drag without destination");
    auto dest = find(*a.destination);
    if (!dest || dest->first != wid) return failure("no component matches '" + a.destination->name + "'");
    SimFile* src = file_in(*w, comp.name);
    SimFile* dst = file_in(*w, dest->second.name);
    if (src && dst) {
      if (!dst->folder) return failure("'" + dst->name + "' is not a folder");
      if (src == dst) return failure("cannot move a folder into itself");
      src->dir = dst->path();
      return ok(true);
    }
    auto from = std::find_if(w->components.begin(), w->components.end(),
                             [&](const SimComponent& c) { return c.name == comp.name; });
    if (from == w->components.end()) return failure("'" + comp.name + "' cannot be moved");
    SimComponent moved = *from;
    w->components.erase(from);
    auto to = std::find_if(w->components.begin(), w->components.end(),
                           [&](const SimComponent& c) { return c.name == dest->second.name; });
    w->components.insert(to, std::move(moved));
    return ok(true);
  }

  ActionResult focus(const LowLevelAction& a) {
    const Component& t = *a.target;
    if (t.control_type == "Window") {
      if (t.name.empty()) return ok();
      for (const auto& w : s_.windows) {
        if (!is_overlay(w) && matches_window(w, t.name)) {
          const int id = w.id;
          dismiss_overlays();
          raise(id);
          return ok(true);
        }
      }
      return failure("window '" + t.name + "' not open");
    }
    SimWindow* f = front();
    if (t.control_type == "Menu") {
      if (f && (f->kind == WindowKind::context_menu || f->kind == WindowKind::menubar)) return ok();
      return failure("no menu is open");
    }
    if (t.control_type == "Pane") {
      if (text::iequals(t.name, "taskbar")) return ok();
      if (text::iequals(t.name, "title bar")) {
        if (!f || is_overlay(*f)) return failure("no focused window");
        return ok();
      }
      return failure("no pane named '" + t.name + "'");
    }
    if (!f) return failure("no focused window");
    auto hit = find(t);
    if (!hit) return failure("no component matches '" + t.name + "'");
    by_id(hit->first)->focus = hit->second.name;
    return ok();
  }

  // ---- triggers ----

  void fire_triggers(const LowLevelAction& a, const std::string& pre_app, const std::string& pre_title, int pre_id) {
    for (auto& tr : s_.triggers) {
      if (tr.fired) continue;
      const auto& c = tr.when;
      const auto squash = [](std::string_view v) {
        std::string out;
        for (char ch : text::lower(v)) {
          if (ch != ' ' && ch != '_' && ch != '-') out.push_back(ch);
        }
        return out;
      };
      if (!c.verb.empty() && squash(c.verb) != squash(to_string(a.verb))) continue;
      if (!c.target.empty() && (!a.target || !text::iequals(a.target->name, c.target))) continue;
      if (!c.app.empty() && !text::iequals(pre_app, c.app)) continue;
      if (!c.title.empty() && !text::icontains(pre_title, c.title)) continue;
      if (!c.keys.empty() && (!a.keys || normalize_chord(*a.keys) != normalize_chord(c.keys))) continue;
      if (!c.text.empty() && (!a.text || *a.text != c.text)) continue;
      tr.fired = true;
      for (const auto& op : tr.then) run_op(op, pre_id);
    }
  }

  SimWindow* op_window(const nlohmann::json& op, int pre_id) {
    if (op.contains("window")) {
      const auto name = op.at("window").get<std::string>();
      for (auto& w : s_.windows) {
        if (!is_overlay(w) && matches_window(w, name)) return &w;
      }
      return nullptr;
    }
    if (SimWindow* w = by_id(pre_id); w && !is_overlay(*w)) return w;
    return base();
  }

  void run_op(const nlohmann::json& op, int pre_id) {
    const auto name = op.at("op").get<std::string>();
    if (name == "open_window") {
      std::string key = op.value("app", "");
      AppTemplate t;
      if (const AppTemplate* found = app_template(key, &key)) t = *found;
      if (op.contains("title")) t.title = op.at("title").get<std::string>();
      if (op.contains("components")) t.components = components_from(op.at("components"));
      t.env_class = env_from(op, "env_class", t.env_class);
      if (op.contains("url")) t.url = op.at("url").get<std::string>();
      open_app(key, t);
      return;
    }
    if (name == "create_file") {
      SimFile f{op.at("dir").get<std::string>(), op.at("name").get<std::string>(), op.value("folder", false),
                op.value("content", "")};
      s_.files.push_back(std::move(f));
      return;
    }
    if (name == "set_clipboard") {
      s_.clipboard = op.at("text").get<std::string>();
      s_.clipboard_is_item = false;
      return;
    }
    SimWindow* w = op_window(op, pre_id);
    if (!w) return;
    if (name == "add_components") {
      for (auto& c : components_from(op.at("components"))) {
        if (SimComponent* existing = static_component(*w, c.name)) {
          *existing = std::move(c);
        } else {
          w->components.push_back(std::move(c));
        }
      }
      place(*w);
    } else if (name == "remove_component") {
      const auto target = op.at("name").get<std::string>();
      w->components.erase(std::remove_if(w->components.begin(), w->components.end(),
                                         [&](const SimComponent& c) { return text::iequals(c.name, target); }),
                          w->components.end());
    } else if (name == "set_value") {
      if (SimComponent* c = static_component(*w, op.at("name").get<std::string>())) c->value = op.at("value").get<std::string>();
    } else if (name == "set_title") {
      w->title = op.at("title").get<std::string>();
    } else if (name == "close_window") {
      close_window(w->id);
    } else if (name == "navigate") {
      navigate(w->id, op.at("url").get<std::string>());
    } else {
      throw Error(ErrorCode::schema, "unknown trigger op '" + name + "'");
    }
  }

  ActionResult apply(const LowLevelAction& a) {
    if (auto v = validate_action(a); !v.empty()) return failure(v);
    SimWindow* f = front();
    const std::string pre_app = f ? f->app : std::string{};
    const std::string pre_title = f ? f->title : std::string{};
    const int pre_id = f ? (is_overlay(*f) && f->owner >= 0 ? f->owner : f->id) : -1;
    if (!f && a.verb != ActionVerb::press && a.verb != ActionVerb::focus) return failure("no focused window");

    ActionResult r;
    switch (a.verb) {
      case ActionVerb::click: r = click(a, false); break;
      case ActionVerb::double_click: r = click(a, true); break;
      case ActionVerb::right_click: r = right_click(a); break;
      case ActionVerb::type: r = type(a); break;
      case ActionVerb::press: r = press(a); break;
      case ActionVerb::scroll: r = scroll(a); break;
      case ActionVerb::drag: r = drag(a); break;
      case ActionVerb::focus: r = focus(a); break;
    }
    if (r.ok) fire_triggers(a, pre_app, pre_title, pre_id);
    return r;
  }

 private:
  SimState& s_;
};

nlohmann::json window_json(const SimWindow& w) {
  nlohmann::json tabs = nlohmann::json::array();
  for (const auto& t : w.tabs) tabs.push_back({{"url", t.url}, {"title", t.title}});
  nlohmann::json j{{"id", w.id},
                   {"app", w.app},
                   {"title", w.title},
                   {"env_class", std::string(to_string(w.env_class))},
                   {"kind", std::string(to_string(w.kind))},
                   {"components", w.components},
                   {"scroll", w.scroll},
                   {"page_rows", w.page_rows},
                   {"tabs", tabs},
                   {"active_tab", w.active_tab},
                   {"focus", w.focus},
                   {"highlight", w.highlight},
                   {"owner", w.owner},
                   {"subject", w.subject},
                   {"buffer", w.buffer},
                   {"renaming", w.renaming},
                   {"saved", w.saved}};
  j["directory"] = w.directory ? nlohmann::json(*w.directory) : nlohmann::json(nullptr);
  return j;
}

AppTemplate template_from_json(const nlohmann::json& j) {
  AppTemplate t;
  t.title = j.value("title", "");
  t.env_class = env_from(j, "env_class", EnvClass::App);
  t.components = components_from(j.value("components", nlohmann::json::array()));
  if (j.contains("directory")) t.directory = j.at("directory").get<std::string>();
  if (j.contains("url")) t.url = j.at("url").get<std::string>();
  t.extensions = j.value("extensions", std::vector<std::string>{});
  for (auto& e : t.extensions) e = text::lower(e);
  t.page_rows = j.value("page_rows", 12);
  return t;
}

void check_unique(const SimWindow& w, const std::vector<SimComponent>& comps) {
  std::set<std::string> seen;
  for (const auto& c : comps) {
    if (!seen.insert(text::lower(c.name)).second)
      throw Error(ErrorCode::schema, "duplicate component '" + c.name + "' in window '" + w.title + "'");
  }
}

}  // namespace

std::string_view to_string(WindowKind k) {
  switch (k) {
    case WindowKind::normal: return "normal";
    case WindowKind::start_menu: return "start-menu";
    case WindowKind::task_switcher: return "task-switcher";
    case WindowKind::context_menu: return "context-menu";
    case WindowKind::dropdown: return "dropdown";
    case WindowKind::menubar: return "menubar";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const SimComponent& c) {
  j = {{"name", c.name}, {"control_type", c.control_type}, {"position", c.position}};
  if (!c.value.empty()) j["value"] = c.value;
  if (c.editable) j["editable"] = true;
  if (c.reveal) j["reveal"] = c.reveal;
  if (!c.opens.empty()) j["opens"] = c.opens;
  if (!c.link.empty()) j["link"] = c.link;
  if (!c.options.empty()) j["options"] = c.options;
}

void from_json(const nlohmann::json& j, SimComponent& c) {
  c.name = j.value("name", "");
  c.control_type = j.contains("control_type") ? j.at("control_type").get<std::string>() : j.value("type", "");
  if (c.name.empty() && c.control_type.empty()) throw Error(ErrorCode::schema, "component needs a name or type");
  c.position = j.contains("position") ? j.at("position").get<Point>() : Point{kUnplaced, kUnplaced};
  c.value = j.value("value", "");
  c.editable = j.value("editable", editable_type(c.control_type));
  c.reveal = j.value("reveal", 0);
  c.opens = j.value("opens", "");
  c.link = j.value("link", "");
  c.options = j.value("options", std::vector<std::string>{});
}

SimDesktop::SimDesktop() = default;

SimDesktop::SimDesktop(SimState initial) : initial_(std::move(initial)), state_(initial_) {}

SimDesktop SimDesktop::from_json(const nlohmann::json& sc) {
  try {
    SimState s;
    s.rng_seed = sc.value("seed", std::uint64_t{0});
    if (sc.contains("screen")) s.screen = sc.at("screen").get<Point>();
    const auto apps = sc.value("apps", nlohmann::json::object());
    for (const auto& [name, t] : apps.items()) s.apps[name] = template_from_json(t);
    const auto pages = sc.value("pages", nlohmann::json::object());
    for (const auto& [url, p] : pages.items()) {
      s.pages[norm_url(url)] = SimPage{p.value("title", url), components_from(p.value("components", nlohmann::json::array()))};
    }
    for (const auto& f : sc.value("files", nlohmann::json::array())) {
      s.files.push_back({f.value("dir", ""), f.at("name").get<std::string>(), f.value("folder", false),
                         f.value("content", "")});
    }
    s.clipboard = sc.value("clipboard", "");
    for (const auto& t : sc.value("triggers", nlohmann::json::array())) {
      Trigger tr;
      const auto& w = t.at("when");
      tr.when = {w.value("verb", ""), w.value("target", ""), w.value("app", ""), w.value("title", ""),
                 w.value("keys", ""), w.value("text", "")};
      for (const auto& op : t.at("then")) {
        if (!op.contains("op")) throw Error(ErrorCode::schema, "trigger op without 'op'");
        tr.then.push_back(op);
      }
      s.triggers.push_back(std::move(tr));
    }

    Engine e(s);
    const auto windows = sc.value("windows", nlohmann::json::array());
    // Listed front first; build back to front so the first ends on top.
    for (auto it = windows.rbegin(); it != windows.rend(); ++it) {
      const auto& wj = *it;
      const std::string app = wj.at("app").get<std::string>();
      if (app.empty()) throw Error(ErrorCode::schema, "window needs an app");
      AppTemplate t;
      if (auto found = s.apps.find(app); found != s.apps.end()) t = found->second;
      if (wj.contains("title")) t.title = wj.at("title").get<std::string>();
      t.env_class = env_from(wj, "env_class", t.env_class);
      if (wj.contains("components")) t.components = components_from(wj.at("components"));
      if (wj.contains("directory")) t.directory = wj.at("directory").get<std::string>();
      if (wj.contains("url")) t.url = wj.at("url").get<std::string>();
      t.page_rows = wj.value("page_rows", t.page_rows);
      const int id = e.open_app(app, t);
      SimWindow* w = e.by_id(id);
      if (wj.contains("tabs")) {
        w->tabs.clear();
        for (const auto& url : wj.at("tabs")) w->tabs.push_back({url.get<std::string>(), ""});
        for (std::size_t i = 0; i < w->tabs.size(); ++i) {
          w->active_tab = static_cast<int>(i);
          e.navigate(id, w->tabs[i].url);
        }
      }
      w->focus = wj.value("focus", "");
      w->saved = wj.value("saved", false);
      check_unique(*w, e.all_components(*w));
    }
    return SimDesktop(std::move(s));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::schema, std::string("scenario: ") + ex.what());
  }
}

SimDesktop SimDesktop::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open scenario " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::schema, path + ": " + ex.what());
  }
}

void SimDesktop::reset() { state_ = initial_; }

Snapshot SimDesktop::capture() {
  Snapshot snap;
  Engine e(state_);
  SimWindow* f = e.front();
  if (!f) return snap;
  for (auto& [id, c] : e.reachable()) snap.components.push_back({c.name, c.control_type, c.position});
  snap.window = WindowContext{f->app, f->title, f->env_class};
  for (const auto& w : state_.windows) {
    if (w.kind == WindowKind::normal) snap.windows.push_back({w.app, w.title, w.env_class});
  }
  return snap;
}

ActionResult SimDesktop::apply(const LowLevelAction& a) {
  Engine e(state_);
  return e.apply(a);
}

nlohmann::json SimDesktop::state_json() const {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : state_.windows) windows.push_back(window_json(w));
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : state_.files) {
    files.push_back({{"dir", f.dir}, {"name", f.name}, {"folder", f.folder}, {"content", f.content}});
  }
  nlohmann::json fired = nlohmann::json::array();
  for (const auto& t : state_.triggers) fired.push_back(t.fired);
  return {{"windows", windows},
          {"clipboard", state_.clipboard},
          {"clipboard_is_item", state_.clipboard_is_item},
          {"files", files},
          {"triggers_fired", fired},
          {"next_id", state_.next_id},
          {"seed", state_.rng_seed}};
}

std::string SimDesktop::hash() const { return text::hex64(text::fnv1a64(state_json().dump())); }

std::optional<std::string> SimDesktop::check(const nlohmann::json& p) const {
  if (!p.is_object() || p.size() != 1) return "predicate must be an object with one key: " + p.dump();
  const auto& [kind, arg] = *p.items().begin();
  const auto window_named = [&](const std::string& name) -> const SimWindow* {
    for (const auto& w : state_.windows) {
      if (w.kind == WindowKind::normal && matches_window(w, name)) return &w;
    }
    return nullptr;
  };
  const auto has_file = [&](const std::string& path) {
    return std::any_of(state_.files.begin(), state_.files.end(),
                       [&](const SimFile& f) { return text::iequals(f.path(), path); });
  };
  Engine e(const_cast<SimState&>(state_));
  const auto find_component = [&](const nlohmann::json& a, const SimWindow** win) -> std::optional<SimComponent> {
    const SimWindow* w = a.contains("window") ? window_named(a.at("window").get<std::string>()) : nullptr;
    if (!w) {
      for (const auto& x : state_.windows) {
        if (x.kind == WindowKind::normal) {
          w = &x;
          break;
        }
      }
    }
    if (!w) return std::nullopt;
    *win = w;
    for (const auto& c : e.all_components(*w)) {
      if (text::iequals(c.name, a.at("name").get<std::string>())) return c;
    }
    return std::nullopt;
  };

  if (kind == "file_exists") {
    if (!has_file(arg.get<std::string>())) return "file '" + arg.get<std::string>() + "' does not exist";
  } else if (kind == "file_absent") {
    if (has_file(arg.get<std::string>())) return "file '" + arg.get<std::string>() + "' still exists";
  } else if (kind == "window_open") {
    if (!window_named(arg.get<std::string>())) return "window '" + arg.get<std::string>() + "' is not open";
  } else if (kind == "window_closed") {
    if (window_named(arg.get<std::string>())) return "window '" + arg.get<std::string>() + "' is still open";
  } else if (kind == "focused") {
    const SimWindow* f = nullptr;
    for (const auto& w : state_.windows) {
      if (w.kind == WindowKind::normal) {
        f = &w;
        break;
      }
    }
    if (!f || !matches_window(*f, arg.get<std::string>())) {
      return "focused window is '" + (f ? f->title : std::string("none")) + "', expected '" + arg.get<std::string>() + "'";
    }
  } else if (kind == "field") {
    const SimWindow* w = nullptr;
    const auto c = find_component(arg, &w);
    if (!c) return "no field '" + arg.at("name").get<std::string>() + "'";
    if (arg.contains("equals") && c->value != arg.at("equals").get<std::string>())
      return "field '" + c->name + "' is '" + c->value + "'";
    if (arg.contains("contains") && c->value.find(arg.at("contains").get<std::string>()) == std::string::npos)
      return "field '" + c->name + "' is '" + c->value + "'";
  } else if (kind == "component") {
    const SimWindow* w = nullptr;
    const auto c = find_component(arg, &w);
    const bool absent = arg.value("absent", false);
    if (absent && c) return "component '" + c->name + "' still present";
    if (!absent && !c) return "component '" + arg.at("name").get<std::string>() + "' missing";
  } else if (kind == "clipboard") {
    if (state_.clipboard != arg.get<std::string>()) return "clipboard is '" + state_.clipboard + "'";
  } else if (kind == "saved") {
    const SimWindow* w = window_named(arg.get<std::string>());
    if (!w || !w->saved) return "window '" + arg.get<std::string>() + "' is not saved";
  } else if (kind == "url") {
    const auto want = norm_url(arg.get<std::string>());
    for (const auto& w : state_.windows) {
      if (w.kind == WindowKind::normal && w.browser() && !w.tabs.empty() && w.tabs[w.active_tab].url == want) return std::nullopt;
    }
    return "no browser shows '" + want + "'";
  } else if (kind == "title_contains") {
    for (const auto& w : state_.windows) {
      if (w.kind != WindowKind::normal) continue;
      if (text::icontains(w.title, arg.get<std::string>())) return std::nullopt;
      return "focused title is '" + w.title + "'";
    }
    return "no window open";
  } else {
    return "unknown predicate '" + kind + "'";
  }
  return std::nullopt;
}

}  // namespace log2plan
