#pragma once

// Shared helpers for the test binaries: fixture paths, temp directories,
// and a small SVG scanner used by the rendering checks.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path testdata() {
  return std::filesystem::path(TESTDATA_DIR);
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate =
          base / ("metaeval-test-" + std::to_string(rng() & 0xffffffffull));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// One tag scanned out of an SVG document.
struct SvgElement {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::string text;  // inner text for <text> elements

  double attr_num(const std::string& name) const {
    auto it = attrs.find(name);
    if (it == attrs.end()) {
      throw std::runtime_error("missing attribute " + name + " on <" + tag +
                               ">");
    }
    return std::stod(it->second);
  }

  bool has_class(const std::string& cls) const {
    auto it = attrs.find("class");
    if (it == attrs.end()) {
      return false;
    }
    std::istringstream words(it->second);
    std::string word;
    while (words >> word) {
      if (word == cls) {
        return true;
      }
    }
    return false;
  }
};

inline std::map<std::string, std::string> parse_attrs(const std::string& body) {
  std::map<std::string, std::string> attrs;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) {
      ++i;
    }
    const std::size_t eq = body.find('=', i);
    if (eq == std::string::npos) {
      break;
    }
    const std::string name = body.substr(i, eq - i);
    if (eq + 1 >= body.size() || body[eq + 1] != '"') {
      break;
    }
    const std::size_t close = body.find('"', eq + 2);
    if (close == std::string::npos) {
      break;
    }
    attrs[name] = body.substr(eq + 2, close - eq - 2);
    i = close + 1;
  }
  return attrs;
}

// Flat scan of all elements. Inner text is captured for non-nested tags
// like <text>...</text>.
inline std::vector<SvgElement> svg_elements(const std::string& svg) {
  std::vector<SvgElement> out;
  std::size_t i = 0;
  while ((i = svg.find('<', i)) != std::string::npos) {
    if (i + 1 < svg.size() && svg[i + 1] == '/') {
      i = svg.find('>', i);
      continue;
    }
    const std::size_t close = svg.find('>', i);
    if (close == std::string::npos) {
      break;
    }
    std::string body = svg.substr(i + 1, close - i - 1);
    const bool self_closing = !body.empty() && body.back() == '/';
    if (self_closing) {
      body.pop_back();
    }
    SvgElement el;
    const std::size_t name_end = body.find_first_of(" \t\n");
    el.tag = body.substr(0, name_end);
    if (name_end != std::string::npos) {
      el.attrs = parse_attrs(body.substr(name_end + 1));
    }
    if (!self_closing) {
      const std::size_t end_tag = svg.find("</" + el.tag, close + 1);
      if (end_tag != std::string::npos) {
        el.text = svg.substr(close + 1, end_tag - close - 1);
      }
    }
    out.push_back(std::move(el));
    i = close + 1;
  }
  return out;
}

inline std::vector<SvgElement> svg_elements_with_class(const std::string& svg,
                                                       const std::string& cls) {
  std::vector<SvgElement> out;
  for (auto& el : svg_elements(svg)) {
    if (el.has_class(cls)) {
      out.push_back(std::move(el));
    }
  }
  return out;
}

// Strict-enough well-formedness check for the documents this project
// emits: balanced tags, quoted attributes, and only the five named
// character entities.
inline bool xml_well_formed(const std::string& doc, std::string* error) {
  const auto fail = [&](const std::string& msg) {
    if (error != nullptr) {
      *error = msg;
    }
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < doc.size()) {
    const char ch = doc[i];
    if (ch == '&') {
      static const char* entities[] = {"&amp;", "&lt;", "&gt;", "&quot;",
                                       "&apos;"};
      bool ok = false;
      for (const char* e : entities) {
        if (doc.compare(i, std::strlen(e), e) == 0) {
          ok = true;
          i += std::strlen(e);
          break;
        }
      }
      if (!ok) {
        return fail("bare & at offset " + std::to_string(i));
      }
      continue;
    }
    if (ch != '<') {
      ++i;
      continue;
    }
    const std::size_t close = doc.find('>', i);
    if (close == std::string::npos) {
      return fail("unterminated tag at offset " + std::to_string(i));
    }
    std::string body = doc.substr(i + 1, close - i - 1);
    if (body.find('<') != std::string::npos) {
      return fail("nested '<' inside tag at offset " + std::to_string(i));
    }
    if (!body.empty() && body[0] == '/') {
      const std::string name = body.substr(1);
      if (stack.empty() || stack.back() != name) {
        return fail("mismatched closing tag </" + name + ">");
      }
      stack.pop_back();
    } else {
      const bool self_closing = !body.empty() && body.back() == '/';
      if (self_closing) {
        body.pop_back();
      }
      const std::size_t name_end = body.find_first_of(" \t\n");
      const std::string name = body.substr(0, name_end);
      if (name.empty()) {
        return fail("empty tag name at offset " + std::to_string(i));
      }
      // attribute quoting: every '=' must be followed by a quoted value
      std::size_t q = 0;
      int quotes = 0;
      while ((q = body.find('"', q)) != std::string::npos) {
        ++quotes;
        ++q;
      }
      if (quotes % 2 != 0) {
        return fail("unbalanced quotes in <" + name + ">");
      }
      if (!self_closing) {
        stack.push_back(name);
      }
    }
    i = close + 1;
  }
  if (!stack.empty()) {
    return fail("unclosed tag <" + stack.back() + ">");
  }
  return true;
}

// Least-squares affine fit y ~ a*x + b; returns the maximum absolute
// residual over the points.
inline double affine_fit_residual(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double a = (n * sxy - sx * sy) / denom;
  const double b = (sy - a * sx) / n;
  double worst = 0.0;
  for (const auto& [x, y] : pts) {
    worst = std::max(worst, std::abs(a * x + b - y));
  }
  return worst;
}

}  // namespace testsupport
