#include "wb/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "wb/clone.hpp"
#include "wb/errors.hpp"
#include "wb/galois.hpp"

namespace wb {
namespace {

// ------------------------------------------------------------ text helpers

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Cuts a '#' comment; quotes protect their contents.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

// Whitespace tokenizer; a quoted section joins into one token with the
// quotes removed, so `pattern="0* | 1"` is a single token.
std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, have = false;
  for (char ch : s) {
    if (ch == '"') {
      quoted = !quoted;
      have = true;
      continue;
    }
    if (!quoted && std::isspace(static_cast<unsigned char>(ch))) {
      if (have || !cur.empty()) out.push_back(cur);
      cur.clear();
      have = false;
      continue;
    }
    cur += ch;
  }
  if (quoted) throw Error("unterminated quote");
  if (have || !cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

long long parse_int(const std::string& tok) {
  if (tok.empty()) throw Error("expected a number, got nothing");
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw Error("expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw Error("trailing characters in number '" + tok + "'");
  return v;
}

Val parse_val(const std::string& tok, FiniteDomain d) {
  const long long v = parse_int(tok);
  if (v < 0 || v >= d.size)
    throw Error("value " + tok + " outside domain of size " + std::to_string(d.size));
  return static_cast<Val>(v);
}

// A run of values: compact digits ("011"), dotted decimal ("10.3"), or "()"
// for the empty tuple.
Tuple parse_value_run(const std::string& tok, FiniteDomain d) {
  Tuple t;
  if (tok == "()") return t;
  if (tok.find('.') != std::string::npos) {
    for (const std::string& part : split_list(tok, '.')) t.push_back(parse_val(part, d));
    return t;
  }
  for (char ch : tok) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw Error("bad value character '" + std::string(1, ch) + "' in '" + tok + "'");
    t.push_back(parse_val(std::string(1, ch), d));
  }
  return t;
}

std::pair<std::string, std::string> split_kv(const std::string& tok) {
  const size_t eq = tok.find('=');
  if (eq == std::string::npos) return {tok, ""};
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace

// -------------------------------------------------------------- literals

EvThread parse_thread_literal(FiniteDomain domain, const std::string& text) {
  Tuple prefix;
  bool bar = false;
  std::optional<Val> tail;
  for (const std::string& tok : split_ws(text)) {
    if (!bar && tok == "|") {
      bar = true;
    } else if (!bar && tok[0] == '|') {
      bar = true;
      tail = parse_val(tok.substr(1), domain);
    } else if (!bar) {
      prefix.push_back(parse_val(tok, domain));
    } else if (!tail) {
      tail = parse_val(tok, domain);
    } else {
      throw Error("extra token '" + tok + "' after the tail");
    }
  }
  if (!tail) throw Error("thread literal needs '| tail': '" + trim(text) + "'");
  return EvThread(domain, std::move(prefix), *tail);
}

EvMatrix parse_matrix_literal(FiniteDomain domain, const std::string& text) {
  const std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error("matrix literal must be bracketed: '" + s + "'");
  std::string body = s.substr(1, s.size() - 2);
  std::optional<std::string> tail_part;
  const size_t sep = body.find(";;");
  if (sep != std::string::npos) {
    tail_part = body.substr(sep + 2);
    if (tail_part->find(";;") != std::string::npos) throw Error("matrix literal has two ';;'");
    body = body.substr(0, sep);
  }
  std::vector<EvThread> rows;
  for (const std::string& part : split_list(body, ';'))
    if (!part.empty()) rows.push_back(parse_thread_literal(domain, part));
  std::optional<EvThread> tail;
  if (tail_part) tail = parse_thread_literal(domain, *tail_part);
  return EvMatrix(domain, std::move(rows), std::move(tail));
}

PatternGen parse_pattern_literal(FiniteDomain domain, const std::string& text) {
  PatternGen g;
  bool bar = false, seen_block = false, seen_tail = false;
  auto run_into = [&](const Tuple& vals) {
    Tuple& side = seen_block ? g.right : g.left;
    side.insert(side.end(), vals.begin(), vals.end());
  };
  auto block_of = [&](const Tuple& vals) {
    if (seen_block) throw Error("pattern has two repeatable blocks");
    seen_block = true;
    g.block = vals;
  };
  for (const std::string& tok : split_ws(text)) {
    if (!bar && tok == "|") {
      bar = true;
    } else if (!bar && tok[0] == '|') {
      bar = true;
      g.tail = parse_val(tok.substr(1), domain);
      seen_tail = true;
    } else if (bar) {
      if (seen_tail) throw Error("extra token '" + tok + "' after the pattern tail");
      g.tail = parse_val(tok, domain);
      seen_tail = true;
    } else if (tok.size() >= 3 && tok.front() == '(' && tok.substr(tok.size() - 2) == ")*") {
      block_of(parse_value_run(tok.substr(1, tok.size() - 3), domain));
    } else if (tok.size() >= 2 && tok.back() == '*') {
      block_of(parse_value_run(tok.substr(0, tok.size() - 1), domain));
    } else {
      run_into(parse_value_run(tok, domain));
    }
  }
  if (!seen_tail) throw Error("pattern literal needs '| tail': '" + trim(text) + "'");
  return g;
}

// -------------------------------------------------------------- parse_spec

namespace {

struct Parser {
  WorkbenchSpec spec;
  std::vector<std::string> lines;
  size_t at = 0;  // 0-based next line
  bool any_object = false;

  int lineno() const { return static_cast<int>(at); }

  template <typename M>
  void declare(M& map, const std::string& name, typename M::mapped_type value,
               const char* what) {
    if (name.empty() || name.find('=') != std::string::npos)
      throw Error(std::string("bad ") + what + " name '" + name + "'");
    if (!map.emplace(name, std::move(value)).second)
      throw Error(std::string(what) + " '" + name + "' redefined");
  }

  void need_domain() const {
    if (!spec.domain_declared) throw Error("domain must be declared before any table");
  }

  std::string rest_after_eq(const std::string& line) const {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw Error("expected '=' in declaration");
    return trim(line.substr(eq + 1));
  }

  void parse_domain(const std::vector<std::string>& toks) {
    if (toks.size() != 2) throw Error("usage: domain N");
    if (spec.domain_declared) throw Error("domain redeclared");
    if (any_object) throw Error("domain must precede every declaration");
    const long long n = parse_int(toks[1]);
    if (n < 1 || n > 255) throw Error("domain size must be in 1..255");
    spec.domain = FiniteDomain{static_cast<int>(n)};
    spec.domain_declared = true;
  }

  void parse_op(const std::vector<std::string>& toks) {
    // op NAME ARITY = TABLE
    if (toks.size() < 5 || toks[3] != "=") throw Error("usage: op NAME ARITY = TABLE");
    const int arity = static_cast<int>(parse_int(toks[2]));
    if (arity < 0) throw Error("negative arity");
    const std::uint64_t want = pow_checked(static_cast<std::uint64_t>(spec.domain.size),
                                           static_cast<unsigned>(arity));
    Tuple table;
    if (toks.size() == 5 && parse_value_run(toks[4], spec.domain).size() == want) {
      table = parse_value_run(toks[4], spec.domain);
    } else {
      for (size_t i = 4; i < toks.size(); ++i) table.push_back(parse_val(toks[i], spec.domain));
    }
    if (table.size() != want)
      throw Error("table needs " + std::to_string(want) + " entries, got " +
                  std::to_string(table.size()));
    declare(spec.ops, toks[1], FinOp(spec.domain, arity, std::move(table)), "op");
  }

  void parse_rel(const std::vector<std::string>& toks) {
    // rel NAME ARITY = T1 T2 ...
    if (toks.size() < 4 || toks[3] != "=") throw Error("usage: rel NAME ARITY = TUPLES");
    const int arity = static_cast<int>(parse_int(toks[2]));
    if (arity < 0) throw Error("negative arity");
    std::vector<Tuple> tuples;
    for (size_t i = 4; i < toks.size(); ++i) {
      Tuple t = parse_value_run(toks[i], spec.domain);
      if (static_cast<int>(t.size()) != arity)
        throw Error("tuple '" + toks[i] + "' has wrong length for arity " +
                    std::to_string(arity));
      tuples.push_back(std::move(t));
    }
    declare(spec.rels, toks[1], FinRel::of(spec.domain, arity, tuples), "rel");
  }

  void parse_thread_decl(const std::string& line, const std::vector<std::string>& toks) {
    if (toks.size() < 3) throw Error("usage: thread NAME = LITERAL");
    declare(spec.threads, toks[1], parse_thread_literal(spec.domain, rest_after_eq(line)),
            "thread");
  }

  void parse_rop(const std::vector<std::string>& toks) {
    // rop NAME w=W : ENTRIES   (entries `prefix+tail->value` or a flat head)
    if (toks.size() < 4) throw Error("usage: rop NAME w=W : ENTRIES");
    std::string wtok = toks[2];
    if (!wtok.empty() && wtok.back() == ':') wtok.pop_back();
    auto [wk, wv] = split_kv(wtok);
    if (wk != "w") throw Error("rop needs w=WIDTH");
    const int w = static_cast<int>(parse_int(wv));
    if (w < 0) throw Error("negative width");
    const std::uint64_t q = static_cast<std::uint64_t>(spec.domain.size);
    const std::uint64_t entries = pow_checked(q, static_cast<unsigned>(w)) * q;
    size_t i = 3;
    if (i < toks.size() && toks[i] == ":") ++i;
    std::vector<std::string> rest(toks.begin() + static_cast<long>(i), toks.end());
    Tuple head;
    if (rest.size() == 1 && rest[0].find("->") == std::string::npos) {
      head = parse_value_run(rest[0], spec.domain);
      if (head.size() != entries)
        throw Error("flat head needs " + std::to_string(entries) + " entries, got " +
                    std::to_string(head.size()));
    } else {
      head.assign(entries, 0);
      std::vector<bool> filled(entries, false);
      for (const std::string& e : rest) {
        const size_t arrow = e.find("->");
        if (arrow == std::string::npos) throw Error("rop entry '" + e + "' needs '->'");
        const Tuple key = parse_value_run(e.substr(0, arrow), spec.domain);
        const Tuple val = parse_value_run(e.substr(arrow + 2), spec.domain);
        if (static_cast<int>(key.size()) != w + 1)
          throw Error("rop entry key '" + e + "' needs " + std::to_string(w + 1) + " values");
        if (val.size() != 1) throw Error("rop entry value in '" + e + "' must be one value");
        const std::uint64_t idx =
            rank_of(std::span<const Val>(key.data(), static_cast<size_t>(w)), spec.domain.size) *
                q +
            key[static_cast<size_t>(w)];
        if (filled[idx]) throw Error("rop entry '" + e + "' repeats a key");
        filled[idx] = true;
        head[idx] = val[0];
      }
      for (bool b : filled)
        if (!b) throw Error("rop head is missing entries");
    }
    declare(spec.rops, toks[1], ROp(spec.domain, w, std::move(head)), "rop");
  }

  void parse_matrix(const std::string& line, const std::vector<std::string>& toks) {
    if (toks.size() < 3) throw Error("usage: matrix NAME = [..] or = { rows }");
    const std::string rest = rest_after_eq(line);
    if (!rest.empty() && rest[0] == '[') {
      declare(spec.matrices, toks[1], parse_matrix_literal(spec.domain, rest), "matrix");
      return;
    }
    if (rest != "{") throw Error("matrix needs '[...]' or a '{' block");
    std::vector<EvThread> rows;
    std::optional<EvThread> tail;
    while (true) {
      if (at >= lines.size()) throw Error("matrix block never closed with '}'");
      std::string body = trim(strip_comment(lines[at]));
      ++at;
      if (body.empty()) continue;
      if (body == "}") break;
      if (body.rfind("tailrow:", 0) == 0) {
        if (tail) throw Error("matrix block has two tailrow lines");
        tail = parse_thread_literal(spec.domain, body.substr(8));
      } else {
        if (tail) throw Error("rows after tailrow");
        rows.push_back(parse_thread_literal(spec.domain, body));
      }
    }
    declare(spec.matrices, toks[1], EvMatrix(spec.domain, std::move(rows), std::move(tail)),
            "matrix");
  }

  void parse_evset(const std::string& line, const std::vector<std::string>& toks) {
    if (toks.size() < 3) throw Error("usage: evset NAME = { .. } or = pattern \"..\"");
    const std::string rest = rest_after_eq(line);
    if (!rest.empty() && rest[0] == '{') {
      if (rest.back() != '}') throw Error("explicit evset must close with '}'");
      std::vector<EvThread> members;
      for (const std::string& part : split_list(rest.substr(1, rest.size() - 2), ';'))
        if (!part.empty()) members.push_back(parse_thread_literal(spec.domain, part));
      declare(spec.evsets, toks[1], EvSet::explicit_set(spec.domain, std::move(members)),
              "evset");
      return;
    }
    // tokens after '=': pattern LITERAL...
    if (toks[2] != "=") throw Error("expected '=' in evset declaration");
    size_t i = 3;
    if (i >= toks.size() || toks[i] != "pattern") throw Error("evset needs '{..}' or 'pattern'");
    std::vector<PatternGen> gens;
    for (++i; i < toks.size(); ++i) gens.push_back(parse_pattern_literal(spec.domain, toks[i]));
    if (gens.empty()) throw Error("pattern evset needs at least one generator");
    declare(spec.evsets, toks[1], EvSet::pattern(spec.domain, std::move(gens)), "evset");
  }

  const DecSeq& decseq_ref(const std::string& name) const {
    auto it = spec.decseqs.find(name);
    if (it == spec.decseqs.end()) throw Error("unknown decseq '" + name + "'");
    return it->second;
  }

  void parse_decseq(const std::vector<std::string>& toks) {
    if (toks.size() < 4 || toks[2] != "=") throw Error("usage: decseq NAME = FORM");
    const std::string& form = toks[3];
    auto arg = [&](size_t i) -> const std::string& {
      if (3 + i >= toks.size()) throw Error("decseq form '" + form + "' is missing arguments");
      return toks[3 + i];
    };
    DecSeq seq = [&]() {
      if (form == "diagonal") return DecSeq::diagonal(spec.domain);
      if (form == "topext") {
        auto [k, v] = split_kv(arg(1));
        if (k != "rel") throw Error("topext needs rel=NAME");
        auto it = spec.rels.find(v);
        if (it == spec.rels.end()) throw Error("unknown rel '" + v + "'");
        return DecSeq::from_finitary(it->second);
      }
      if (form == "closure") {
        auto [k, v] = split_kv(arg(1));
        if (k == "evset") {
          auto it = spec.evsets.find(v);
          if (it == spec.evsets.end()) throw Error("unknown evset '" + v + "'");
          return DecSeq::local_closure(it->second);
        }
        if (k == "pattern")
          return DecSeq::local_closure(
              EvSet::pattern(spec.domain, {parse_pattern_literal(spec.domain, v)}));
        throw Error("closure needs evset=NAME or pattern=\"..\"");
      }
      if (form == "op") {
        const std::string& which = arg(1);
        if (which == "intersect") return DecSeq::intersect(decseq_ref(arg(2)), decseq_ref(arg(3)));
        if (which == "join") return DecSeq::join(decseq_ref(arg(2)), decseq_ref(arg(3)));
        if (which == "exists") {
          auto [k, v] = split_kv(arg(3));
          if (k != "coords") throw Error("exists needs coords=i,j,..");
          std::vector<int> coords;
          for (const std::string& c : split_list(v)) coords.push_back(static_cast<int>(parse_int(c)));
          return DecSeq::exists(decseq_ref(arg(2)), std::move(coords));
        }
        if (which == "permute") {
          auto [k, v] = split_kv(arg(3));
          if (k != "sigma") throw Error("permute needs sigma=i,j,..");
          std::vector<int> sigma;
          for (const std::string& c : split_list(v)) sigma.push_back(static_cast<int>(parse_int(c)));
          return DecSeq::permute(decseq_ref(arg(2)), sigma);
        }
        throw Error("unknown decseq op '" + which + "'");
      }
      throw Error("unknown decseq form '" + form + "'");
    }();
    declare(spec.decseqs, toks[1], std::move(seq), "decseq");
  }

  void parse_task(const std::vector<std::string>& toks, int line) {
    if (toks.size() < 2) throw Error("usage: task KIND [key=value ..]");
    TaskSpec t;
    t.kind = toks[1];
    t.line = line;
    for (size_t i = 2; i < toks.size(); ++i) {
      auto [k, v] = split_kv(toks[i]);
      if (k.empty()) throw Error("bad task argument '" + toks[i] + "'");
      if (!t.args.emplace(k, v).second) throw Error("task argument '" + k + "' repeated");
    }
    t.name = t.args.count("name") ? t.args.at("name")
                                  : t.kind + "#" + std::to_string(spec.tasks.size() + 1);
    spec.tasks.push_back(std::move(t));
  }

  void run(const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    while (at < lines.size()) {
      const int line_no = static_cast<int>(at) + 1;
      const std::string body = trim(strip_comment(lines[at]));
      ++at;
      if (body.empty()) continue;
      try {
        const std::vector<std::string> toks = split_ws(body);
        const std::string& head = toks[0];
        if (head == "domain") {
          parse_domain(toks);
          continue;
        }
        need_domain();
        any_object = true;
        if (head == "op")
          parse_op(toks);
        else if (head == "rel")
          parse_rel(toks);
        else if (head == "thread")
          parse_thread_decl(body, toks);
        else if (head == "rop")
          parse_rop(toks);
        else if (head == "matrix")
          parse_matrix(body, toks);
        else if (head == "evset")
          parse_evset(body, toks);
        else if (head == "decseq")
          parse_decseq(toks);
        else if (head == "task")
          parse_task(toks, line_no);
        else
          throw Error("unknown declaration '" + head + "'");
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    }
  }
};

// ------------------------------------------------- task argument checking

struct ArgSpec {
  // reference kinds: o=op list, r=rel list, p=rop, P=rop list, t=thread,
  // m=matrix, e=evset, d=decseq, D=decseq list, R=rel, i=integer, s=string,
  // f=bare flag
  char kind;
  bool required;
};

const std::map<std::string, std::map<std::string, ArgSpec>>& task_table() {
  static const std::map<std::string, std::map<std::string, ArgSpec>> table = {
      {"geiger", {{"ops", {'o', true}}, {"opcap", {'i', false}}, {"relcap", {'i', false}}}},
      {"axioms",
       {{"kind", {'s', true}},
        {"width", {'i', false}},
        {"exhaustive", {'f', false}},
        {"sampled", {'f', false}},
        {"samples", {'i', false}},
        {"seed", {'i', false}},
        {"nmax", {'i', false}}}},
      {"clone", {{"ops", {'o', true}}, {"cap", {'i', false}}}},
      {"relclone", {{"rels", {'r', true}}, {"cap", {'i', false}}}},
      {"pol", {{"rels", {'r', true}}, {"cap", {'i', false}}}},
      {"inv", {{"ops", {'o', true}}, {"cap", {'i', false}}}},
      {"polomega", {{"rels", {'r', true}}, {"width", {'i', false}}}},
      {"invfin", {{"rops", {'P', true}}, {"cap", {'i', false}}}},
      {"cutint", {{"rels", {'r', true}}, {"n", {'i', true}}}},
      {"cut", {{"decseq", {'d', true}}, {"k", {'i', true}}}},
      {"limmember",
       {{"thread", {'t', true}}, {"decseq", {'d', true}}, {"depth", {'i', false}}}},
      {"gpoly",
       {{"rop", {'p', true}},
        {"evset", {'e', false}},
        {"decseq", {'d', false}},
        {"matrix", {'m', false}},
        {"cols", {'i', false}},
        {"prefix", {'i', false}},
        {"depth", {'i', false}}}},
      {"botpoly",
       {{"rop", {'p', true}},
        {"evset", {'e', true}},
        {"cols", {'i', false}},
        {"prefix", {'i', false}},
        {"depth", {'i', false}}}},
      {"matpoly",
       {{"rop", {'p', true}},
        {"matrix", {'m', true}},
        {"rel", {'R', false}},
        {"evset", {'e', false}},
        {"cols", {'i', false}},
        {"prefix", {'i', false}},
        {"depth", {'i', false}}}},
      {"clmember",
       {{"rop", {'p', true}},
        {"clone", {'P', true}},
        {"prefix", {'i', false}},
        {"expect", {'s', false}}}},
      {"duedue2",
       {{"rop", {'p', true}},
        {"gens", {'P', true}},
        {"width", {'i', false}},
        {"alpha", {'i', false}},
        {"prefix", {'i', false}}}},
      {"thmclone",
       {{"family", {'D', true}},
        {"relcap", {'i', false}},
        {"opcap", {'i', false}},
        {"widthcap", {'i', false}},
        {"require", {'s', false}}}},
  };
  return table;
}

void validate_task(const WorkbenchSpec& spec, const TaskSpec& t) {
  auto fail = [&](const std::string& m) { throw ParseError(t.line, m); };
  const auto& table = task_table();
  auto kt = table.find(t.kind);
  if (kt == table.end()) fail("unknown task kind '" + t.kind + "'");
  const auto& allowed = kt->second;
  for (const auto& [key, spec_entry] : allowed)
    if (spec_entry.required && !t.args.count(key))
      fail("task " + t.kind + " needs " + key + "=");
  for (const auto& [key, value] : t.args) {
    if (key == "name") continue;
    auto it = allowed.find(key);
    if (it == allowed.end()) fail("task " + t.kind + " does not take " + key + "=");
    auto check_name = [&](const auto& map, const char* what, const std::string& n) {
      if (!map.count(n)) fail(std::string("unknown ") + what + " '" + n + "'");
    };
    try {
      switch (it->second.kind) {
        case 'i':
          parse_int(value);
          break;
        case 'o':
          for (const std::string& n : split_list(value)) check_name(spec.ops, "op", n);
          break;
        case 'r':
          for (const std::string& n : split_list(value)) check_name(spec.rels, "rel", n);
          break;
        case 'P':
          for (const std::string& n : split_list(value)) check_name(spec.rops, "rop", n);
          break;
        case 'D':
          for (const std::string& n : split_list(value)) check_name(spec.decseqs, "decseq", n);
          break;
        case 'p':
          check_name(spec.rops, "rop", value);
          break;
        case 'R':
          check_name(spec.rels, "rel", value);
          break;
        case 't':
          check_name(spec.threads, "thread", value);
          break;
        case 'm':
          check_name(spec.matrices, "matrix", value);
          break;
        case 'e':
          check_name(spec.evsets, "evset", value);
          break;
        case 'd':
          check_name(spec.decseqs, "decseq", value);
          break;
        default:
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  const bool has_evset = t.args.count("evset"), has_decseq = t.args.count("decseq"),
             has_rel = t.args.count("rel");
  if (t.kind == "gpoly" && has_evset == has_decseq)
    fail("task gpoly needs exactly one of evset= or decseq=");
  if (t.kind == "matpoly" && has_evset == has_rel)
    fail("task matpoly needs exactly one of rel= or evset=");
  if (t.kind == "cutint" && split_list(t.args.at("rels")).empty())
    fail("task cutint needs at least one relation");
}

// ----------------------------------------------------------- dispatching

struct Ctx {
  const WorkbenchSpec& spec;
  const TaskSpec& task;
  TaskResult& res;

  void put(const std::string& k, const std::string& v) { res.fields.emplace_back(k, v); }
  void put(const std::string& k, std::uint64_t v) { put(k, std::to_string(v)); }
  void put(const std::string& k, long long v) { put(k, std::to_string(v)); }
  void put(const std::string& k, int v) { put(k, std::to_string(v)); }
  void put(const std::string& k, bool v) { put(k, std::string(v ? "true" : "false")); }

  bool has(const char* k) const { return task.args.count(k) > 0; }
  std::string str(const char* k, const std::string& dflt = "") const {
    auto it = task.args.find(k);
    return it == task.args.end() ? dflt : it->second;
  }
  int num(const char* k, int dflt) const {
    auto it = task.args.find(k);
    return it == task.args.end() ? dflt : static_cast<int>(parse_int(it->second));
  }

  template <typename M>
  const typename M::mapped_type& ref(const M& map, const char* key, const char* what) const {
    const std::string name = str(key);
    auto it = map.find(name);
    if (it == map.end()) throw UnknownName(std::string(what) + " '" + name + "'");
    return it->second;
  }
  std::vector<FinOp> op_list(const char* key) const {
    std::vector<FinOp> out;
    for (const std::string& n : split_list(str(key))) {
      auto it = spec.ops.find(n);
      if (it == spec.ops.end()) throw UnknownName("op '" + n + "'");
      out.push_back(it->second);
    }
    return out;
  }
  std::vector<FinRel> rel_list(const char* key) const {
    std::vector<FinRel> out;
    for (const std::string& n : split_list(str(key))) {
      auto it = spec.rels.find(n);
      if (it == spec.rels.end()) throw UnknownName("rel '" + n + "'");
      out.push_back(it->second);
    }
    return out;
  }
  std::vector<ROp> rop_list(const char* key) const {
    std::vector<ROp> out;
    for (const std::string& n : split_list(str(key))) {
      auto it = spec.rops.find(n);
      if (it == spec.rops.end()) throw UnknownName("rop '" + n + "'");
      out.push_back(it->second);
    }
    return out;
  }

  void put_verdict(const PolVerdict& v) {
    const char* word = v.kind == PolVerdict::Kind::Holds            ? "holds"
                       : v.kind == PolVerdict::Kind::FailsWith      ? "fails-with"
                                                                    : "holds-up-to-bounds";
    put("verdict", std::string(word));
    if (v.witness) put("witness", v.witness->to_string());
    if (!v.note.empty()) put("note", v.note);
    res.pass = v.ok();
  }
  GPolyBounds gbounds() const {
    GPolyBounds b;
    b.max_distinct_cols = num("cols", b.max_distinct_cols);
    b.max_prefix = num("prefix", b.max_prefix);
    b.depth = num("depth", b.depth);
    return b;
  }
  void put_gbounds(const GPolyBounds& b) {
    put("cols", b.max_distinct_cols);
    put("prefix", b.max_prefix);
    put("depth", b.depth);
  }
};

AxiomKind axiom_kind_of(const std::string& s) {
  static const std::map<std::string, AxiomKind> m = {
      {"C1", AxiomKind::C1}, {"C2", AxiomKind::C2}, {"C3", AxiomKind::C3},
      {"C4", AxiomKind::C4}, {"C5", AxiomKind::C5}, {"N1", AxiomKind::N1},
      {"N2", AxiomKind::N2}, {"N3", AxiomKind::N3}};
  auto it = m.find(s);
  if (it == m.end()) throw Error("unknown axiom kind '" + s + "'");
  return it->second;
}

void put_slice_counts(Ctx& c, int cap, const std::function<std::uint64_t(int)>& size_of) {
  std::uint64_t total = 0;
  for (int k = 0; k <= cap; ++k) {
    const std::uint64_t n = size_of(k);
    total += n;
    c.put("arity" + std::to_string(k), n);
  }
  c.put("total", total);
}

void dispatch(Ctx& c) {
  const WorkbenchSpec& spec = c.spec;
  const FiniteDomain d = spec.domain;
  const std::string& kind = c.task.kind;

  if (kind == "geiger") {
    CloneCaps caps;
    caps.op_arity_cap = c.num("opcap", caps.op_arity_cap);
    caps.rel_arity_cap = c.num("relcap", caps.rel_arity_cap);
    const GeigerReport rep = geiger_roundtrip(d, c.op_list("ops"), caps);
    c.put("opcap", caps.op_arity_cap);
    c.put("relcap", caps.rel_arity_cap);
    c.put("equal", rep.equal);
    c.put("clone_size", rep.clone_size);
    c.put("invariants", rep.invariant_count);
    c.put("polinv_size", rep.pol_inv_size);
    if (rep.extra_op) c.put("extra", rep.extra_op->to_string());
    c.res.pass = rep.equal;
  } else if (kind == "axioms") {
    SamplePlan plan;
    plan.width_cap = c.num("width", 1);
    plan.exhaustive = plan.width_cap <= 1;
    if (c.has("exhaustive")) plan.exhaustive = true;
    if (c.has("sampled") || c.has("samples")) plan.exhaustive = false;
    plan.samples = c.num("samples", plan.samples);
    plan.seed = static_cast<std::uint64_t>(c.num("seed", static_cast<int>(plan.seed)));
    plan.n_max = c.num("nmax", plan.n_max);
    const AxiomReport rep = axiom_suite(d, axiom_kind_of(c.str("kind")), plan);
    c.put("axiom", c.str("kind"));
    c.put("width", plan.width_cap);
    c.put("mode", std::string(plan.exhaustive ? "exhaustive" : "sampled"));
    c.put("instances", rep.instances);
    if (rep.surrogate) c.put("surrogate", true);
    if (!rep.pass) c.put("counterexample", rep.counterexample);
    c.res.pass = rep.pass;
  } else if (kind == "clone") {
    const int cap = c.num("cap", 2);
    const OpSet s = generate_clone(d, c.op_list("ops"), cap);
    c.put("cap", cap);
    put_slice_counts(c, cap, [&](int k) { return static_cast<std::uint64_t>(s.slice(k).size()); });
    c.res.pass = true;
  } else if (kind == "relclone") {
    const int cap = c.num("cap", 3);
    const RelSet s = relation_clone_generate(d, c.rel_list("rels"), cap);
    c.put("cap", cap);
    put_slice_counts(c, cap, [&](int k) { return static_cast<std::uint64_t>(s.slice(k).size()); });
    c.res.pass = true;
  } else if (kind == "pol") {
    const int cap = c.num("cap", 2);
    const OpSet s = pol(d, c.rel_list("rels"), cap);
    c.put("cap", cap);
    put_slice_counts(c, cap, [&](int k) { return static_cast<std::uint64_t>(s.slice(k).size()); });
    c.res.pass = true;
  } else if (kind == "inv") {
    const int cap = c.num("cap", 3);
    const RelSet s = inv(d, c.op_list("ops"), cap);
    c.put("cap", cap);
    put_slice_counts(c, cap, [&](int k) { return static_cast<std::uint64_t>(s.slice(k).size()); });
    c.res.pass = true;
  } else if (kind == "polomega") {
    const int width = c.num("width", 2);
    const std::vector<ROp> ops = pol_omega(d, c.rel_list("rels"), width);
    c.put("width", width);
    c.put("count", static_cast<std::uint64_t>(ops.size()));
    c.res.pass = true;
  } else if (kind == "invfin") {
    const int cap = c.num("cap", 3);
    const RelSet s = inv_finitary(d, c.rop_list("rops"), cap);
    c.put("cap", cap);
    put_slice_counts(c, cap, [&](int k) { return static_cast<std::uint64_t>(s.slice(k).size()); });
    c.res.pass = true;
  } else if (kind == "cutint") {
    const int n = c.num("n", 1);
    const std::vector<FinRel> family = c.rel_list("rels");
    const FinRel joint = cut_of_intersection(family, n);
    std::vector<FinRel> padded;
    for (const FinRel& s : family) padded.push_back(top_cut(s, n));
    const FinRel naive = FinRel::intersect(padded);
    c.put("n", n);
    c.put("cut", joint.to_string());
    c.put("padded", naive.to_string());
    c.put("equal", joint == naive);
    c.res.pass = true;
  } else if (kind == "cut") {
    const int k = c.num("k", 0);
    const DecSeq& seq = c.ref(spec.decseqs, "decseq", "decseq");
    c.put("k", k);
    c.put("rel", seq.cut(k).to_string());
    c.res.pass = true;
  } else if (kind == "limmember") {
    const int depth = c.num("depth", 8);
    const EvThread& s = c.ref(spec.threads, "thread", "thread");
    const Verdict v = lim_membership(s, c.ref(spec.decseqs, "decseq", "decseq"), depth);
    c.put("thread", s.to_string());
    c.put("depth", depth);
    c.put("verdict", v.to_string());
    c.res.pass = !v.is_out();
  } else if (kind == "gpoly") {
    const ROp& phi = c.ref(spec.rops, "rop", "rop");
    const GPolyBounds b = c.gbounds();
    PolVerdict v = PolVerdict::bounded();
    if (c.has("matrix")) {
      const EvMatrix& m = c.ref(spec.matrices, "matrix", "matrix");
      v = c.has("evset") ? check_matrix_gpoly(phi, c.ref(spec.evsets, "evset", "evset"), m)
                         : check_matrix_gpoly(phi, c.ref(spec.decseqs, "decseq", "decseq"), m,
                                              b.depth);
    } else {
      v = c.has("evset") ? is_g_polymorphism(phi, c.ref(spec.evsets, "evset", "evset"), b)
                         : is_g_polymorphism(phi, c.ref(spec.decseqs, "decseq", "decseq"), b);
    }
    c.put("rop", c.str("rop"));
    c.put("target", c.has("evset") ? c.str("evset") : c.str("decseq"));
    c.put_gbounds(b);
    c.put_verdict(v);
  } else if (kind == "botpoly") {
    const GPolyBounds b = c.gbounds();
    const PolVerdict v =
        is_bot_polymorphism(c.ref(spec.rops, "rop", "rop"), c.ref(spec.evsets, "evset", "evset"), b);
    c.put("rop", c.str("rop"));
    c.put("target", c.str("evset"));
    c.put_gbounds(b);
    c.put_verdict(v);
  } else if (kind == "matpoly") {
    const ROp& phi = c.ref(spec.rops, "rop", "rop");
    const EvMatrix& m = c.ref(spec.matrices, "matrix", "matrix");
    const GPolyBounds b = c.gbounds();
    c.put("rop", c.str("rop"));
    c.put("matrix", m.to_string());
    if (c.has("rel")) {
      c.put("target", c.str("rel"));
      c.put_verdict(matrical_polymorphism(phi, c.ref(spec.rels, "rel", "rel"), m));
    } else {
      c.put("target", c.str("evset"));
      c.put_gbounds(b);
      c.put_verdict(matrical_polymorphism(phi, c.ref(spec.evsets, "evset", "evset"), m, b));
    }
  } else if (kind == "clmember") {
    const int prefix = c.num("prefix", 3);
    const bool member =
        cl_membership(c.ref(spec.rops, "rop", "rop"), c.rop_list("clone"),
                      canonical_local_spec(d, prefix));
    const std::string expect = c.str("expect", "in");
    if (expect != "in" && expect != "out") throw Error("expect= must be in or out");
    c.put("rop", c.str("rop"));
    c.put("prefix", prefix);
    c.put("member", member);
    c.put("expect", expect);
    c.res.pass = member == (expect == "in");
  } else if (kind == "duedue2") {
    DueBounds b;
    b.width_cap = c.num("width", b.width_cap);
    b.alpha_max = c.num("alpha", b.alpha_max);
    b.prefix_max = c.num("prefix", b.prefix_max);
    const PolVerdict v =
        duedue2_condition4_check(c.ref(spec.rops, "rop", "rop"), c.rop_list("gens"), b);
    c.put("rop", c.str("rop"));
    c.put("width", b.width_cap);
    c.put("alpha", b.alpha_max);
    c.put("prefix", b.prefix_max);
    c.put_verdict(v);
  } else if (kind == "thmclone") {
    std::vector<DecSeq> family;
    for (const std::string& n : split_list(c.str("family"))) {
      auto it = spec.decseqs.find(n);
      if (it == spec.decseqs.end()) throw UnknownName("decseq '" + n + "'");
      family.push_back(it->second);
    }
    const int relcap = c.num("relcap", 3), opcap = c.num("opcap", 3),
              widthcap = c.num("widthcap", 3);
    const CloneInclusionReport rep =
        theorem_clone_inclusion_check(d, family, relcap, opcap, widthcap);
    c.put("relcap", relcap);
    c.put("opcap", opcap);
    c.put("widthcap", widthcap);
    c.put("inclusion", rep.inclusion);
    c.put("equality", rep.equality);
    auto sizes = [](const std::vector<std::uint64_t>& v) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    c.put("lhs", sizes(rep.lhs_sizes));
    c.put("rhs", sizes(rep.rhs_sizes));
    if (!rep.violation.empty()) c.put("violation", rep.violation);
    const std::string require = c.str("require", "inclusion");
    c.res.pass = require == "equality" ? rep.equality : rep.inclusion;
  } else {
    throw Error("unknown task kind '" + kind + "'");
  }
}

}  // namespace

WorkbenchSpec parse_spec(const std::string& text) {
  Parser p;
  p.run(text);
  for (const TaskSpec& t : p.spec.tasks) validate_task(p.spec, t);
  std::set<std::string> names;
  for (const TaskSpec& t : p.spec.tasks)
    if (!names.insert(t.name).second)
      throw ParseError(t.line, "task name '" + t.name + "' repeated");
  return p.spec;
}

TaskResult run_task(const WorkbenchSpec& spec, const TaskSpec& task) {
  TaskResult res;
  res.name = task.name;
  res.kind = task.kind;
  const auto start = std::chrono::steady_clock::now();
  Ctx c{spec, task, res};
  dispatch(c);
  res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

bool Report::all_pass() const {
  for (const TaskResult& r : results)
    if (!r.pass) return false;
  return true;
}

Report run_all(const WorkbenchSpec& spec, const std::string& only) {
  Report rep;
  rep.domain = spec.domain;
  bool matched = only.empty();
  for (const TaskSpec& t : spec.tasks) {
    if (!only.empty() && t.name != only) continue;
    matched = true;
    try {
      rep.results.push_back(run_task(spec, t));
    } catch (const Error& e) {
      TaskResult res;
      res.name = t.name;
      res.kind = t.kind;
      res.pass = false;
      res.fields.emplace_back("error", e.what());
      rep.results.push_back(std::move(res));
    }
  }
  if (!matched) throw UnknownName("task '" + only + "'");
  return rep;
}

namespace {

bool needs_quotes(const std::string& v) {
  if (v.empty()) return true;
  for (char ch : v)
    if (std::isspace(static_cast<unsigned char>(ch))) return true;
  return false;
}

std::string field_value(const std::string& v) {
  return needs_quotes(v) ? "\"" + v + "\"" : v;
}

}  // namespace

std::string emit_report(const Report& report, ReportFormat format) {
  std::uint64_t passed = 0;
  for (const TaskResult& r : report.results) passed += r.pass ? 1 : 0;
  std::string out;
  if (format == ReportFormat::Lines) {
    out += "domain=" + std::to_string(report.domain.size) +
           " tasks=" + std::to_string(report.results.size()) +
           " pass=" + std::to_string(passed) +
           " fail=" + std::to_string(report.results.size() - passed) + "\n";
    for (const TaskResult& r : report.results) {
      out += "task=" + field_value(r.name) + " kind=" + r.kind +
             " status=" + (r.pass ? "pass" : "fail");
      for (const auto& [k, v] : r.fields) out += " " + k + "=" + field_value(v);
      out += "\n";
    }
    return out;
  }
  out += "workbench: domain " + std::to_string(report.domain.size) + ", " +
         std::to_string(report.results.size()) + " task" +
         (report.results.size() == 1 ? "" : "s") + "\n";
  for (const TaskResult& r : report.results) {
    out += std::string(r.pass ? "[PASS] " : "[FAIL] ") + r.name + " (" + r.kind + ", " +
           std::to_string(r.wall_ms) + " ms)\n";
    for (const auto& [k, v] : r.fields) out += "    " + k + " = " + v + "\n";
  }
  out += "summary: " + std::to_string(passed) + "/" + std::to_string(report.results.size()) +
         " passed\n";
  return out;
}

}  // namespace wb
