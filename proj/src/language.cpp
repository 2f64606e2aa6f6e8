#include "g3/language.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <set>

#include "g3/error.hpp"

namespace g3 {

std::string_view to_string(ConstituentKind k) {
  switch (k) {
    case ConstituentKind::None: return "none";
    case ConstituentKind::Entity: return "entity";
    case ConstituentKind::Relation: return "relation";
  }
  return "?";
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_punctuation_tag(std::string_view tag) {
  static const std::set<std::string_view> tags{".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$", "HYPH"};
  return tags.contains(tag);
}

bool is_determiner(std::string_view word) {
  static const std::set<std::string_view> words{"the", "a", "an", "this", "that", "these", "those"};
  return words.contains(word);
}

bool is_path_preposition(std::string_view word) {
  static const std::set<std::string_view> words{"to", "through", "past", "along", "toward", "towards", "down"};
  return words.contains(word);
}

// --- bracketed trees -----------------------------------------------------------

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  ParseTree read() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseFormatError("empty parse", pos_);
    node(-1);
    skip_ws();
    if (pos_ != s_.size()) throw ParseFormatError("trailing text after tree", pos_);
    fill_words(0);
    return std::move(tree_);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string token() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  int node(int parent) {
    if (pos_ >= s_.size() || s_[pos_] != '(') throw ParseFormatError("expected '('", pos_);
    const std::size_t open = pos_++;
    skip_ws();
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    tree_.nodes[id].id = id;
    tree_.nodes[id].parent = parent;
    std::string label = token();
    skip_ws();
    if (pos_ >= s_.size()) throw ParseFormatError("unbalanced parentheses", open);
    if (s_[pos_] == '(') {
      tree_.nodes[id].category = label.empty() ? "ROOT" : label;
      while (true) {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseFormatError("unbalanced parentheses", open);
        if (s_[pos_] == ')') break;
        if (s_[pos_] != '(') throw ParseFormatError("bare word inside a phrase", pos_);
        const int child = node(id);
        tree_.nodes[id].children.push_back(child);
      }
    } else {
      if (label.empty()) throw ParseFormatError("leaf without a tag", open);
      const std::size_t at = pos_;
      std::string word = token();
      if (word.empty()) throw ParseFormatError("empty constituent", at);
      skip_ws();
      if (pos_ >= s_.size()) throw ParseFormatError("unbalanced parentheses", open);
      if (s_[pos_] != ')') throw ParseFormatError("leaf has more than one word", pos_);
      tree_.nodes[id].category = label;
      tree_.nodes[id].words = {word};
    }
    ++pos_;
    return id;
  }

  void fill_words(int id) {
    Constituent& c = tree_.nodes[id];
    if (c.children.empty()) return;
    std::vector<std::string> words;
    for (int ch : c.children) {
      fill_words(ch);
      const auto& w = tree_.nodes[ch].words;
      words.insert(words.end(), w.begin(), w.end());
    }
    tree_.nodes[id].words = std::move(words);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  ParseTree tree_;
};

void serialize_into(const ParseTree& t, int id, std::string& out) {
  const Constituent& c = t.at(id);
  out += '(';
  out += c.category;
  if (c.children.empty()) {
    out += ' ';
    out += c.words.front();
  }
  for (int ch : c.children) {
    out += ' ';
    serialize_into(t, ch, out);
  }
  out += ')';
}

void copy_subtree(const ParseTree& from, int id, int parent, ParseTree& to) {
  const int nid = static_cast<int>(to.nodes.size());
  Constituent c = from.at(id);
  c.id = nid;
  c.parent = parent;
  c.children.clear();
  to.nodes.push_back(c);
  for (int ch : from.at(id).children) {
    const int cid = static_cast<int>(to.nodes.size());
    copy_subtree(from, ch, nid, to);
    to.nodes[nid].children.push_back(cid);
  }
}

}  // namespace

ParseTree ParseTree::subtree(int id) const {
  ParseTree out;
  copy_subtree(*this, id, -1, out);
  return out;
}

ParseTree read_parse(std::string_view text) { return Reader(text).read(); }

std::string serialize(const ParseTree& tree) {
  std::string out;
  if (!tree.nodes.empty()) serialize_into(tree, 0, out);
  return out;
}

std::string canonical(std::string_view text) { return serialize(read_parse(text)); }

// --- classification ------------------------------------------------------------

std::string base_category(std::string_view category) {
  if (category.empty() || category.front() == '-') return std::string(category);
  const auto cut = category.find_first_of("-=");
  return std::string(category.substr(0, cut));
}

std::vector<int> factor_children(const ParseTree& tree, int id) {
  std::vector<int> out;
  for (int ch : tree.at(id).children) {
    const Constituent& c = tree.at(ch);
    if (c.kind != ConstituentKind::None) {
      out.push_back(ch);
    } else if (!c.is_preterminal()) {
      const auto deeper = factor_children(tree, ch);
      out.insert(out.end(), deeper.begin(), deeper.end());
    }
  }
  return out;
}

namespace {

bool is_structural(const std::string& cat) {
  static const std::set<std::string> cats{"ROOT", "S",    "SBAR", "SINV", "SQ",   "SBARQ", "FRAG", "PRT",
                                          "ADVP", "ADJP", "QP",   "CONJP", "PRN", "INTJ",  "UCP",  "LST"};
  return cats.contains(cat);
}

void classify(ParseTree& t, int id, bool absorbed) {
  Constituent& c = t.nodes[id];
  c.kind = ConstituentKind::None;
  c.warning = false;
  if (c.is_preterminal()) return;
  const std::vector<int> children = c.children;
  if (absorbed) {
    for (int ch : children) classify(t, ch, true);
    return;
  }
  const std::string cat = base_category(c.category);
  if (cat == "NP") {
    bool has_pp = false, has_np = false;
    for (int ch : children) {
      const std::string cc = base_category(t.at(ch).category);
      has_pp |= cc == "PP";
      has_np |= cc == "NP";
    }
    if (has_pp && has_np) {
      for (int ch : children) {
        if (base_category(t.at(ch).category) == "PP") {
          t.nodes[ch].kind = ConstituentKind::None;
          for (int g : t.at(ch).children) classify(t, g, false);
        } else {
          classify(t, ch, false);
        }
      }
      t.nodes[id].kind = factor_children(t, id).size() >= 2 ? ConstituentKind::Relation : ConstituentKind::Entity;
    } else {
      t.nodes[id].kind = ConstituentKind::Entity;
      for (int ch : children) classify(t, ch, true);
    }
    return;
  }
  if (cat == "PP" || cat == "VP") {
    for (int ch : children) classify(t, ch, false);
    t.nodes[id].kind = factor_children(t, id).empty() ? ConstituentKind::Entity : ConstituentKind::Relation;
    return;
  }
  if (is_structural(cat)) {
    for (int ch : children) classify(t, ch, false);
    return;
  }
  c.kind = ConstituentKind::Entity;
  c.warning = true;
  std::cerr << "warning: unknown category '" << c.category << "' treated as entity\n";
  for (int ch : children) classify(t, ch, true);
}

bool is_clause(const Constituent& c) {
  const std::string cat = base_category(c.category);
  return cat == "VP" || cat == "S";
}

void split_into(const ParseTree& t, int id, std::vector<ParseTree>& out) {
  const Constituent& c = t.at(id);
  std::vector<int> clauses;
  bool has_cc = false;
  for (int ch : c.children) {
    if (is_clause(t.at(ch))) clauses.push_back(ch);
    has_cc |= base_category(t.at(ch).category) == "CC";
  }
  const std::string cat = base_category(c.category);
  if ((cat == "ROOT" || cat == "S" || cat == "VP" || cat == "SINV") && clauses.size() >= 2 && has_cc) {
    for (int ch : clauses) split_into(t, ch, out);
    return;
  }
  if ((cat == "ROOT" || cat == "S") && clauses.size() == 1) {
    std::vector<ParseTree> inner;
    split_into(t, clauses[0], inner);
    if (inner.size() > 1) {
      for (auto& p : inner) out.push_back(std::move(p));
      return;
    }
  }
  out.push_back(t.subtree(id));
}

}  // namespace

ParseTree classify_constituents(ParseTree tree) {
  if (!tree.nodes.empty()) classify(tree, 0, false);
  return tree;
}

std::vector<ParseTree> split_clauses(const ParseTree& tree) {
  if (tree.nodes.empty()) return {tree};
  std::vector<ParseTree> out;
  split_into(tree, 0, out);
  if (out.size() == 1) return {tree};
  return out;
}

// --- tokenization and the fallback parser ----------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == '.' || ch == ',' || ch == '!' || ch == '?' || ch == ';' || ch == ':' || ch == '"') {
      flush();
      if (ch != '"') out.emplace_back(1, ch);
    } else {
      cur += ch;
    }
  }
  flush();
  return out;
}

namespace {

const std::set<std::string_view> kManipVerbs{"put", "place", "set", "bring", "carry", "move", "take",
                                             "load", "drop", "unload", "deliver"};
const std::set<std::string_view> kVerbs{"put", "place", "set",  "bring", "carry", "move", "take", "load",
                                        "drop", "unload", "deliver", "pick", "lift", "grab", "raise",
                                        "lower", "go",  "drive", "walk", "head", "turn", "fly",
                                        "navigate", "back", "come", "approach"};
const std::set<std::string_view> kPrepositions{"on",   "onto",   "to",      "near",   "in",    "into",
                                               "inside", "under", "beside", "behind", "by",    "at",
                                               "from", "through", "past",  "along",  "toward", "towards",
                                               "down", "up",     "off",    "across", "around", "over",
                                               "next", "with"};
const std::set<std::string_view> kParticles{"up", "down", "off", "away"};

std::string leaf(const char* tag, const std::string& word) { return std::string("(") + tag + " " + word + ")"; }

struct ClauseParser {
  std::vector<std::string> toks;
  std::size_t k = 0;

  bool done() const { return k >= toks.size(); }
  std::string low(std::size_t i) const { return i < toks.size() ? lowercase(toks[i]) : std::string(); }

  std::string np() {
    std::string out = "(NP";
    bool any = false;
    while (!done() && !kPrepositions.contains(low(k))) {
      const std::string w = low(k);
      if (is_determiner(w)) out += " " + leaf("DT", toks[k]);
      else if (w == "it" || w == "them") out += " " + leaf("PRP", toks[k]);
      else out += " " + leaf("NN", toks[k]);
      any = true;
      ++k;
    }
    if (!any) throw InvalidInput("expected a noun phrase in command");
    return out + ")";
  }

  std::string pp() {
    std::string out = "(PP " + leaf("IN", toks[k]);
    ++k;
    if (low(k - 1) == "next" && low(k) == "to") {
      out += " " + leaf("TO", toks[k]);
      ++k;
    }
    return out + " " + np() + ")";
  }

  // Trailing PPs become modifiers of `head`, each nested in the one before.
  std::string nested_pps(const std::string& head) {
    if (done()) return head;
    return "(NP " + head + " " + nested_pps_tail() + ")";
  }

  static std::string wrap_pp(const std::string& pp_text, const std::string& inner) {
    // pp_text = "(PP (IN x) (NP ...))": replace its NP with (NP (NP ...) inner).
    const auto np_at = pp_text.find("(NP");
    const std::string head = pp_text.substr(np_at, pp_text.size() - 1 - np_at);
    return pp_text.substr(0, np_at) + "(NP " + head + " " + inner + "))";
  }

  std::string clause() {
    const std::string verb = low(k);
    std::string vp = "(VP " + leaf("VB", toks[k]);
    ++k;
    const bool manip = kManipVerbs.contains(verb);
    if (!done() && kParticles.contains(low(k)) && k + 1 < toks.size() && !kPrepositions.contains(low(k + 1)) &&
        verb != "go" && verb != "drive" && verb != "walk" && verb != "fly") {
      vp += " (PRT " + leaf("RP", toks[k]) + ")";
      ++k;
    }
    if (done()) return vp + ")";
    if (!kPrepositions.contains(low(k))) {
      std::string object = np();
      if (done()) return vp + " " + object + ")";
      if (!manip) return vp + " " + nested_pps(object) + ")";
      vp += " " + object;
    }
    std::string first = pp();
    if (!done()) first = wrap_pp(first, nested_pps_tail());
    return vp + " " + first + ")";
  }

  std::string nested_pps_tail() {
    std::vector<std::string> chain;
    while (!done()) chain.push_back(pp());
    std::string tail = chain.back();
    for (std::size_t i = chain.size() - 1; i-- > 0;) tail = wrap_pp(chain[i], tail);
    return tail;
  }
};

}  // namespace

ParseTree parse_imperative(std::string_view command) {
  std::vector<std::string> toks;
  std::string punct;
  for (std::string& t : tokenize(command)) {
    if (t == "." || t == "!" || t == "?" || t == ",") {
      if (t != ",") punct = t;
      continue;
    }
    toks.push_back(std::move(t));
  }
  if (toks.empty()) throw InvalidInput("empty command");

  // Clause boundaries: "and"/"then" followed by a verb.
  std::vector<std::vector<std::string>> clauses(1);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string w = lowercase(toks[i]);
    if ((w == "and" || w == "then") && i + 1 < toks.size()) {
      std::size_t j = i + 1;
      if (lowercase(toks[j]) == "then") ++j;
      if (j < toks.size() && kVerbs.contains(lowercase(toks[j])) && !clauses.back().empty()) {
        clauses.emplace_back();
        i = j - 1;
        continue;
      }
    }
    clauses.back().push_back(toks[i]);
  }

  std::vector<std::string> parts;
  for (auto& c : clauses) {
    ClauseParser p{c, 0};
    if (kVerbs.contains(p.low(0))) {
      parts.push_back(p.clause());
    } else {
      std::string head = p.np();
      parts.push_back(p.done() ? head : p.nested_pps(head));
    }
  }
  std::string body;
  if (parts.size() == 1) {
    body = parts[0];
  } else {
    body = "(VP";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) body += " (CC and)";
      body += " " + parts[i];
    }
    body += ")";
  }
  const bool is_vp = body.rfind("(VP", 0) == 0;
  std::string text = "(ROOT ";
  text += is_vp ? "(S " + body : body;
  if (!punct.empty() && is_vp) text += " " + leaf(".", punct);
  if (is_vp) text += ")";
  text += ")";
  return read_parse(text);
}

// --- route-direction chunking ------------------------------------------------------

namespace {

const std::set<std::string_view> kDirectionVerbs{
    "go",    "walk",   "turn",  "head",   "take",   "continue", "proceed", "enter", "exit", "leave", "pass",
    "follow", "fly",   "climb", "drive",  "move",   "stop",     "make",    "keep",  "run",  "travel", "descend",
    "ascend", "cross", "face",  "veer",   "bear",   "navigate"};
const std::set<std::string_view> kDirectives{
    "left",   "right", "straight", "up",   "down",   "around", "back",  "forward", "forwards", "ahead",
    "past",   "through", "to",     "toward", "towards", "into", "onto", "along",   "across",   "until",
    "out",    "in",    "at",       "by",   "near",   "on",     "upstairs", "downstairs", "over", "again"};

bool starts_clause(std::string_view w) { return kDirectionVerbs.contains(w) || kDirectives.contains(w); }

}  // namespace

FlatCommand chunk_directions(std::string_view text) {
  FlatCommand out;
  std::vector<std::vector<std::string>> clauses(1);
  const std::vector<std::string> toks = [&] {
    std::vector<std::string> t;
    for (auto& w : tokenize(text)) t.push_back(lowercase(w));
    return t;
  }();
  auto boundary = [&] {
    if (!clauses.back().empty()) clauses.emplace_back();
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string& w = toks[i];
    if (w == "." || w == "!" || w == "?" || w == ";") {
      boundary();
      continue;
    }
    if (w == "and" || w == "then" || w == ",") {
      std::size_t j = i + 1;
      while (j < toks.size() && (toks[j] == "and" || toks[j] == "then" || toks[j] == ",")) ++j;
      if (j < toks.size() && starts_clause(toks[j])) {
        boundary();
        i = j - 1;
        continue;
      }
      if (w == "then" && clauses.back().empty()) continue;
      if (w == ",") continue;
    }
    clauses.back().push_back(w);
  }
  for (const auto& c : clauses) {
    if (c.empty()) continue;
    DirectionSegment seg;
    std::size_t k = 0;
    if (kDirectionVerbs.contains(c[0])) seg.verb_words.push_back(c[k++]);
    while (k < c.size()) {
      if (kDirectives.contains(c[k])) {
        seg.verb_words.push_back(c[k++]);
      } else if ((c[k] == "a" || c[k] == "the") && k + 1 < c.size() && (c[k + 1] == "left" || c[k + 1] == "right")) {
        seg.verb_words.push_back(c[k++]);
        seg.verb_words.push_back(c[k++]);
      } else {
        break;
      }
    }
    if (seg.verb_words.empty()) seg.verb_words = {"go"};
    if (k < c.size()) seg.landmark_words = std::vector<std::string>(c.begin() + static_cast<long>(k), c.end());
    out.segments.push_back(std::move(seg));
  }
  if (out.segments.empty() && !toks.empty()) out.segments.push_back({{"go"}, std::nullopt});
  return out;
}

std::string to_string(const FlatCommand& flat) {
  auto join = [](const std::vector<std::string>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
    return s;
  };
  std::string out;
  for (const DirectionSegment& s : flat.segments) {
    out += "(" + join(s.verb_words) + " | " + (s.landmark_words ? join(*s.landmark_words) : "-") + ")\n";
  }
  return out;
}

}  // namespace g3
