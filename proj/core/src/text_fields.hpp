#pragma once

// Line records of the form "TAG key=value key=value ...". A value may hold
// spaces (polynomials do); tokens without '=' extend the previous value.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tautrel/errors.hpp"

namespace tautrel::detail {

inline std::map<std::string, std::string> record_fields(const std::string& line, std::string* tag = nullptr) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string tok, cur;
  in >> tok;
  if (tag) *tag = tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) {
      cur = tok.substr(0, eq);
      out[cur] = tok.substr(eq + 1);
    } else if (!cur.empty()) {
      out[cur] += " " + tok;
    } else {
      throw ParseError("stray token '" + tok + "'");
    }
  }
  return out;
}

inline int field_int(const std::map<std::string, std::string>& f, const std::string& k) {
  auto it = f.find(k);
  if (it == f.end()) throw ParseError("missing field " + k);
  try {
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw ParseError("bad integer in " + k);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer in " + k);
  }
}

inline std::vector<int> field_ints(const std::map<std::string, std::string>& f, const std::string& k) {
  auto it = f.find(k);
  if (it == f.end()) throw ParseError("missing field " + k);
  std::vector<int> out;
  std::string cur;
  for (char ch : it->second + ",") {
    if (ch == ',') {
      if (cur.empty()) continue;
      try {
        size_t pos = 0;
        out.push_back(std::stoi(cur, &pos));
        if (pos != cur.size()) throw ParseError("bad list in " + k);
      } catch (const std::logic_error&) {
        throw ParseError("bad list in " + k);
      }
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

inline std::string join_ints(const std::vector<int>& v, char sep = ',') {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace tautrel::detail
