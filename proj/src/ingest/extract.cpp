#include "ingest/extract.hpp"

#include <map>
#include <set>
#include <vector>

#include "common/error.hpp"
#include "common/strings.hpp"
#include "common/utf8.hpp"

namespace cyents {
namespace {

const std::set<std::string> kSkipped = {"script", "style", "nav", "header", "footer", "aside", "form",
                                        "noscript", "svg", "iframe", "template", "button", "select"};
const std::set<std::string> kRawText = {"script", "style", "noscript", "template"};
const std::set<std::string> kVoid = {"area", "base", "br", "col", "embed", "hr", "img", "input",
                                     "link", "meta", "source", "track", "wbr"};
const std::set<std::string> kClosesParagraph = {"p", "div", "ul", "ol", "table", "h1", "h2", "h3", "h4", "h5", "h6",
                                                "blockquote", "pre", "section", "article", "figure", "hr", "dl"};

const std::map<std::string, std::string, std::less<>> kNamed = {
    {"amp", "&"},        {"lt", "<"},         {"gt", ">"},         {"quot", "\""},      {"apos", "'"},
    {"nbsp", " "},       {"mdash", "—"}, {"ndash", "–"}, {"hellip", "…"}, {"rsquo", "’"},
    {"lsquo", "‘"}, {"ldquo", "“"}, {"rdquo", "”"}, {"copy", "©"},  {"reg", "®"},
    {"trade", "™"}, {"laquo", "«"}, {"raquo", "»"}, {"bull", "•"},  {"middot", "·"}};

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::size_t end = 0;  // index one past '>'
};

// Parses the tag starting at html[pos] == '<'. Returns false for a bare '<'.
bool read_tag(std::string_view html, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < html.size() && (is_ascii_alnum(html[i]) || html[i] == '-' || html[i] == ':')) ++i;
  if (i == name_start) return false;
  tag.name = fold_case(html.substr(name_start, i - name_start));
  char quote = 0;
  for (; i < html.size(); ++i) {
    const char c = html[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      tag.self_closing = i > 0 && html[i - 1] == '/';
      tag.end = i + 1;
      return true;
    }
  }
  tag.end = html.size();
  return true;
}

struct Paragraph {
  int parent;
  std::string text;
};

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view body = s.substr(i + 1, semi - i - 1);
    if (!body.empty() && body[0] == '#') {
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const std::string_view digits = body.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        if (hex ? !is_hex_digit(c) : !is_ascii_digit(c)) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(is_ascii_digit(c) ? c - '0' : ascii_lower(c) - 'a' + 10);
        if (cp > 0x10FFFF) {
          ok = false;
          break;
        }
      }
      if (ok && cp != 0 && !(cp >= 0xD800 && cp <= 0xDFFF)) {
        append_utf8(out, cp == 0xA0 ? 0x20 : cp);
        i = semi;
        continue;
      }
    } else if (const auto it = kNamed.find(body); it != kNamed.end()) {
      out += it->second;
      i = semi;
      continue;
    }
    out.push_back('&');
  }
  return out;
}

std::string extract_article(std::string_view html) {
  struct Open {
    std::string name;
    int id;
  };
  std::vector<Open> stack;
  int next_id = 1;
  int skip_depth = 0;  // number of open skipped elements
  std::vector<Paragraph> paragraphs;
  bool in_p = false;
  int p_parent = 0;
  std::string p_text;

  auto close_paragraph = [&] {
    if (!in_p) return;
    in_p = false;
    std::string text = collapse_whitespace(decode_entities(p_text));
    p_text.clear();
    if (!text.empty()) paragraphs.push_back({p_parent, std::move(text)});
  };
  auto pop_to = [&](const std::string& name) {
    for (std::size_t k = stack.size(); k-- > 0;) {
      if (stack[k].name != name) continue;
      for (std::size_t j = stack.size(); j-- > k;) {
        if (stack[j].name == "p") close_paragraph();
        if (kSkipped.count(stack[j].name)) --skip_depth;
      }
      stack.resize(k);
      return;
    }
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      const auto next = html.find('<', i);
      const std::size_t end = next == std::string_view::npos ? html.size() : next;
      if (in_p && skip_depth == 0) p_text.append(html.substr(i, end - i));
      i = end;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      const auto end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    Tag tag;
    if (!read_tag(html, i, tag)) {
      if (in_p && skip_depth == 0) p_text.push_back('<');
      ++i;
      continue;
    }
    i = tag.end;
    if (tag.closing) {
      pop_to(tag.name);
      continue;
    }
    if (kRawText.count(tag.name) && !tag.self_closing) {
      const std::string closer = "</" + tag.name;
      std::size_t k = i;
      while (true) {
        k = html.find("</", k);
        if (k == std::string_view::npos || fold_case(html.substr(k, closer.size())) == closer) break;
        k += 2;
      }
      if (k == std::string_view::npos) {
        i = html.size();
      } else {
        Tag close;
        i = read_tag(html, k, close) ? close.end : k + 2;
      }
      continue;
    }
    if (tag.name == "br") {
      if (in_p) p_text.push_back(' ');
      continue;
    }
    if (kClosesParagraph.count(tag.name) && in_p) pop_to("p");
    if (kVoid.count(tag.name) || tag.self_closing) continue;
    if (kSkipped.count(tag.name)) ++skip_depth;
    if (tag.name == "p" && skip_depth == 0) {
      in_p = true;
      p_parent = stack.empty() ? 0 : stack.back().id;
      p_text.clear();
    } else if (in_p) {
      // Inline element boundary inside a paragraph.
      if (tag.name != "a" && tag.name != "span" && tag.name != "em" && tag.name != "strong" && tag.name != "b" &&
          tag.name != "i" && tag.name != "code" && tag.name != "sup" && tag.name != "sub") {
        p_text.push_back(' ');
      }
    }
    stack.push_back({tag.name, next_id++});
  }
  close_paragraph();

  std::map<int, std::size_t> weight;
  for (const auto& p : paragraphs) weight[p.parent] += p.text.size();
  int best = -1;
  std::size_t best_weight = 0;
  for (const auto& p : paragraphs) {
    if (weight[p.parent] > best_weight) {
      best = p.parent;
      best_weight = weight[p.parent];
    }
  }
  std::string out;
  for (const auto& p : paragraphs) {
    if (p.parent != best) continue;
    if (!out.empty()) out.push_back(' ');
    out += p.text;
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyExtraction, "no paragraph content found");
  return out;
}

}  // namespace cyents
