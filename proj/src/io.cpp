#include "gramdist/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {
constexpr Char kRawByteBase = 0xDC00;
}

void write_slp(std::ostream& out, const Slp& g) {
  out << "SLPv1\nstart " << g.start() << '\n';
  for (Symbol a = 0; a < g.symbol_count(); ++a) {
    if (g.is_terminal(a)) {
      out << "T " << a << ' ' << g.terminal_char(a) << '\n';
      continue;
    }
    out << "N " << a;
    for (Symbol c : g.rhs(a)) out << ' ' << c;
    out << '\n';
  }
}

bool looks_like_slp(std::string_view bytes) {
  if (bytes.substr(0, 5) != "SLPv1") return false;
  return bytes.size() == 5 || bytes[5] == '\n' || bytes[5] == '\r';
}

Slp read_slp(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error(Errc::parse_error, "line " + std::to_string(line_no) + ": " + why);
  };
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line() || line != "SLPv1") throw fail("missing SLPv1 header");
  if (!next_line()) throw fail("missing start line");
  std::uint64_t start = 0;
  {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw >> start) || kw != "start") throw fail("expected 'start <id>'");
  }
  std::vector<RuleSpec> rules;
  while (next_line()) {
    std::istringstream ls(line);
    std::string kind;
    RuleSpec r;
    if (!(ls >> kind >> r.id)) throw fail("expected a symbol line");
    if (kind == "T") {
      std::uint64_t cp = 0;
      if (!(ls >> cp) || cp > 0xFFFFFFFFull) throw fail("bad code point");
      r.terminal = true;
      r.ch = static_cast<Char>(cp);
    } else if (kind == "N") {
      std::uint64_t id = 0;
      while (ls >> id) r.rhs.push_back(id);
      if (!ls.eof()) throw fail("bad symbol id");
    } else {
      throw fail("unknown line kind '" + kind + "'");
    }
    std::string extra;
    if (r.terminal && (ls >> extra)) throw fail("trailing tokens");
    rules.push_back(std::move(r));
  }
  if (rules.empty()) throw Error(Errc::empty_input, "grammar has no symbols");
  return Slp::build(rules, start);
}

Text utf8_decode(std::string_view bytes) {
  Text out;
  out.reserve(bytes.size());
  const auto* s = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char c = s[i];
    std::size_t len = 0;
    Char cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len > 0 && i + len <= n;
    for (std::size_t j = 1; ok && j < len; ++j) {
      if ((s[i + j] & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (s[i + j] & 0x3F);
    }
    static constexpr Char min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
    if (ok && (cp < min_for_len[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(kRawByteBase + c);  // surrogate escape keeps the round trip exact
      ++i;
    }
  }
  return out;
}

std::string utf8_encode(std::span<const Char> text) {
  std::string out;
  out.reserve(text.size());
  for (Char cp : text) {
    if (cp == kDollar) cp = '$';
    else if (cp == kMismatch) cp = '@';
    else if (is_sentinel(cp)) cp = '#';
    if (cp >= kRawByteBase + 0x80 && cp <= kRawByteBase + 0xFF) {
      out.push_back(static_cast<char>(cp - kRawByteBase));
    } else if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

}  // namespace gramdist
