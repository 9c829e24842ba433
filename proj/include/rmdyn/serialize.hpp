#pragma once

// Text formats shared by the CLI and the tests.
//
// Constraint document (JSON):
//   {"n": 3, "r": 1, "variant": [1],
//    "rules": [{"index": 0, "rule": "zero"}, ...,
//              {"index": 4, "rule": "dynamic", "source": 3}]}
// `rules` lists every frozen index in ascending order.
//
// Permutation document (JSON):
//   {"n": 3, "perms": [{"A": ["010", "100", "001"], "b": "000"}]}
// A is row-major, one string per row; character t of b is b_t.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmdyn/analysis.hpp"
#include "rmdyn/autgroup.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/sim.hpp"

namespace rmdyn {

using json = nlohmann::json;

inline json constraint_to_json(const Constraint& c) {
  json rules = json::array();
  for (std::size_t k : c.spec.frozen_set) {
    const auto& f = c.rules[k];
    if (f.kind == RuleKind::kDynamic) {
      rules.push_back({{"index", k}, {"rule", "dynamic"}, {"source", f.source}});
    } else {
      rules.push_back({{"index", k}, {"rule", "zero"}});
    }
  }
  return {{"n", c.spec.n}, {"r", c.spec.r}, {"variant", c.variant}, {"rules", rules}};
}

// Rebuilds the constraint from (n, r, variant) and checks the rule table
// against it, so a hand-edited table that breaks the construction is
// rejected rather than silently replaced.
inline Constraint constraint_from_json(const json& j) {
  try {
    const Constraint c = build_constraint(make_spec(j.at("r").get<int>(), j.at("n").get<int>()), j.at("variant").get<Variant>());
    if (j.contains("rules")) {
      const auto& rules = j.at("rules");
      if (rules.size() != c.spec.frozen_set.size()) throw ConfigError("constraint: rule table size mismatch");
      for (std::size_t t = 0; t < rules.size(); ++t) {
        const auto& e = rules[t];
        const auto idx = e.at("index").get<std::size_t>();
        if (idx != c.spec.frozen_set[t]) throw ConfigError("constraint: rule table index mismatch at " + std::to_string(idx));
        const auto kind = e.at("rule").get<std::string>();
        const auto& want = c.rules[idx];
        if (kind == "zero") {
          if (want.kind != RuleKind::kZero) throw ConfigError("constraint: rule mismatch at " + std::to_string(idx));
        } else if (kind == "dynamic") {
          if (want.kind != RuleKind::kDynamic || want.source != e.at("source").get<std::size_t>()) {
            throw ConfigError("constraint: rule mismatch at " + std::to_string(idx));
          }
        } else {
          throw ConfigError("constraint: unknown rule '" + kind + "'");
        }
      }
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("constraint: ") + e.what());
  }
}

inline json perms_to_json(const std::vector<AffinePerm>& perms, int n) {
  json list = json::array();
  for (const auto& p : perms) {
    json rows = json::array();
    for (std::size_t r = 0; r < p.a.rows(); ++r) {
      std::string s;
      for (std::size_t c = 0; c < p.a.cols(); ++c) s.push_back(p.a.get(r, c) ? '1' : '0');
      rows.push_back(s);
    }
    std::string b;
    for (auto bit : p.offset) b.push_back(bit ? '1' : '0');
    list.push_back({{"A", rows}, {"b", b}});
  }
  return {{"n", n}, {"perms", list}};
}

inline std::vector<AffinePerm> perms_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<AffinePerm> out;
    for (const auto& e : j.at("perms")) {
      std::string text;
      for (const auto& row : e.at("A")) text += row.get<std::string>() + "\n";
      const BitMatrix a = parse_text(text);
      if (a.rows() != static_cast<std::size_t>(n) || a.cols() != static_cast<std::size_t>(n)) {
        throw ConfigError("permutation: A must be n x n");
      }
      const auto b = e.at("b").get<std::string>();
      if (b.size() != static_cast<std::size_t>(n)) throw ConfigError("permutation: b must have n bits");
      std::vector<std::uint8_t> off;
      for (char ch : b) {
        if (ch != '0' && ch != '1') throw ConfigError("permutation: b must be a 0/1 string");
        off.push_back(ch == '1' ? 1 : 0);
      }
      out.push_back(to_permutation(a, std::move(off)));
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("permutation file: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

// "weight,count" lines.
inline std::string spectrum_to_text(const WeightSpectrum& ws) {
  std::ostringstream os;
  os << "# method=" << to_string(ws.method) << " exact=" << (ws.exact ? "true" : "false") << "\n";
  os << "weight,count\n";
  for (const auto& [w, c] : ws.counts) os << w << "," << c << "\n";
  return os.str();
}

inline std::string bler_csv_header() { return "decoder,ebn0_db,trials,errors,bler,ci95_lo,ci95_hi\n"; }

inline std::string bler_to_csv(const std::string& decoder, const std::vector<BlerPoint>& pts) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& p : pts) {
    const auto ci = p.ci95();
    os << decoder << "," << p.ebn0_db << "," << p.trials << "," << p.errors << "," << p.bler() << "," << ci.lo << ","
       << ci.hi << "\n";
  }
  return os.str();
}

inline json bler_to_json(const std::string& decoder, const std::vector<BlerPoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) {
    const auto ci = p.ci95();
    arr.push_back({{"decoder", decoder},
                   {"ebn0_db", p.ebn0_db},
                   {"trials", p.trials},
                   {"errors", p.errors},
                   {"bler", p.bler()},
                   {"ci95", {ci.lo, ci.hi}}});
  }
  return arr;
}

}  // namespace rmdyn
