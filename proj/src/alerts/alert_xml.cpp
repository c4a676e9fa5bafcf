#include "breachsim/alerts/alert_xml.hpp"

#include <charconv>
#include <map>
#include <memory>
#include <vector>

namespace breachsim::alerts {

namespace {

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
}

std::string esc(std::string_view s) {
  std::string out;
  escape_into(out, s);
  return out;
}

void leaf(std::string& out, int depth, std::string_view name, std::string_view text) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += name;
  out += '>';
  escape_into(out, text);
  out += "</";
  out += name;
  out += ">\n";
}

// ---- minimal XML reader -------------------------------------------------

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<std::unique_ptr<Node>> children;
  std::string text;

  const std::string* attr(std::string_view k) const {
    for (const auto& [n, v] : attrs) {
      if (n == k) return &v;
    }
    return nullptr;
  }
  const Node* child(std::string_view k) const {
    for (const auto& c : children) {
      if (c->name == k) return c.get();
    }
    return nullptr;
  }
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::unique_ptr<Node> document() {
    skip_misc();
    if (starts("<?xml")) {
      const auto end = s_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated declaration");
      pos_ = end + 2;
    }
    skip_misc();
    auto root = element();
    skip_misc();
    if (pos_ != s_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw MalformedDocument("alert xml at offset " + std::to_string(pos_) + ": " + why);
  }
  bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }
  static bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  void skip_ws() {
    while (pos_ < s_.size() && space(s_[pos_])) ++pos_;
  }
  void skip_misc() {
    while (true) {
      skip_ws();
      if (!starts("<!--")) return;
      const auto end = s_.find("-->", pos_);
      if (end == std::string_view::npos) fail("unterminated comment");
      pos_ = end + 3;
    }
  }
  static bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == ':' || c == '.';
  }
  std::string name() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (b == pos_) fail("expected a name");
    return std::string(s_.substr(b, pos_ - b));
  }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string decode(std::string_view raw) const {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '<') fail("'<' in text");
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else if (ent.size() > 1 && ent[0] == '#') {
        unsigned v = 0;
        const bool hex = ent[1] == 'x';
        const std::string_view digits = ent.substr(hex ? 2 : 1);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
        if (ec != std::errc{} || p != digits.data() + digits.size() || v == 0 || v > 0x7f) {
          fail("unsupported character reference");
        }
        out += static_cast<char>(v);
      } else {
        fail("unknown entity");
      }
      i = semi;
    }
    return out;
  }

  std::unique_ptr<Node> element() {
    expect('<');
    auto node = std::make_unique<Node>();
    node->name = name();
    while (true) {
      skip_ws();
      if (starts("/>")) {
        pos_ += 2;
        return node;
      }
      if (starts(">")) {
        ++pos_;
        break;
      }
      std::string key = name();
      skip_ws();
      expect('=');
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted attribute value");
      const char q = s_[pos_++];
      const auto end = s_.find(q, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute");
      if (node->attr(key)) fail("duplicate attribute " + key);
      node->attrs.emplace_back(std::move(key), decode(s_.substr(pos_, end - pos_)));
      pos_ = end + 1;
    }
    std::string text;
    while (true) {
      const auto lt = s_.find('<', pos_);
      if (lt == std::string_view::npos) fail("unterminated element " + node->name);
      text += decode(s_.substr(pos_, lt - pos_));
      pos_ = lt;
      if (starts("</")) {
        pos_ += 2;
        if (name() != node->name) fail("mismatched close tag for " + node->name);
        skip_ws();
        expect('>');
        break;
      }
      if (starts("<!--")) {
        const auto end = s_.find("-->", pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      node->children.push_back(element());
    }
    if (node->children.empty()) {
      node->text = std::move(text);
    } else {
      for (char c : text) {
        if (!space(c)) fail("mixed content in " + node->name);
      }
    }
    return node;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

template <class Int>
Int to_int(std::string s, const char* what) {
  // surrounding blanks are layout, not data
  const auto b = s.find_first_not_of(" \t\r\n");
  s = b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw MalformedDocument(std::string("alert xml: bad integer in ") + what);
  }
  return v;
}

}  // namespace

std::string serialize_alert_xml(const Alert& a) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<alert id=\"" + std::to_string(a.id) + "\" detector=\"" + esc(a.detector) + "\" severity=\"" +
         std::string(sim::to_string(a.severity)) + "\" classtype=\"" + esc(a.classtype) + "\">\n";
  leaf(out, 1, "alert-type", a.alert_type);
  leaf(out, 1, "msg", a.msg);
  leaf(out, 1, "display-msg", a.display_msg);
  for (const auto& ev : a.evidence) {
    out += "  <malicious-alert seq=\"" + std::to_string(ev.seq) + "\" kind=\"" + esc(ev.kind) + "\"";
    if (ev.produces.empty() && ev.consumes.empty()) {
      out += "/>\n";
      continue;
    }
    out += ">\n";
    for (const auto& p : ev.produces) leaf(out, 2, "produces", p);
    for (const auto& c : ev.consumes) leaf(out, 2, "consumes", c);
    out += "  </malicious-alert>\n";
  }
  leaf(out, 1, "subject-host", a.subject_host.str());
  leaf(out, 1, "timestamp", std::to_string(a.timestamp));
  out += "</alert>\n";
  return out;
}

Alert parse_alert_xml(std::string_view text) {
  const auto root = Reader(text).document();
  if (root->name != "alert") throw MalformedDocument("alert xml: root element is " + root->name);

  Alert a;
  const std::string* sev = root->attr("severity");
  if (!sev) throw MissingField("severity");
  auto parsed = sim::parse_severity(*sev);
  if (!parsed) throw MalformedDocument("alert xml: unknown severity " + *sev);
  a.severity = *parsed;
  const Node* type = root->child("alert-type");
  if (!type) throw MissingField("alert-type");
  a.alert_type = type->text;

  if (const auto* v = root->attr("id")) a.id = to_int<std::uint64_t>(*v, "id");
  if (const auto* v = root->attr("detector")) a.detector = *v;
  if (const auto* v = root->attr("classtype")) a.classtype = *v;

  for (const auto& c : root->children) {
    if (c->name == "alert-type") continue;
    if (c->name == "msg") {
      a.msg = c->text;
    } else if (c->name == "display-msg") {
      a.display_msg = c->text;
    } else if (c->name == "subject-host") {
      a.subject_host = sim::HostId(c->text);
    } else if (c->name == "timestamp") {
      a.timestamp = to_int<sim::Minutes>(c->text, "timestamp");
    } else if (c->name == "malicious-alert") {
      EvidenceRef ev;
      if (const auto* v = c->attr("seq")) ev.seq = to_int<std::uint64_t>(*v, "malicious-alert seq");
      if (const auto* v = c->attr("kind")) ev.kind = *v;
      for (const auto& g : c->children) {
        if (g->name == "produces") ev.produces.push_back(g->text);
        else if (g->name == "consumes") ev.consumes.push_back(g->text);
        else throw MalformedDocument("alert xml: unexpected element " + g->name + " in malicious-alert");
      }
      a.evidence.push_back(std::move(ev));
    } else {
      throw MalformedDocument("alert xml: unexpected element " + c->name);
    }
  }
  return a;
}

}  // namespace breachsim::alerts
