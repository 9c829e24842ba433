// rmdyn_cli: construct / stability / memory / analyze / simulate / perms / repro
//
// Exit codes: 0 ok, 2 bad configuration, 3 resource cap.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rmdyn/analysis.hpp"
#include "rmdyn/autgroup.hpp"
#include "rmdyn/codespec.hpp"
#include "rmdyn/error.hpp"
#include "rmdyn/serialize.hpp"
#include "rmdyn/sim.hpp"

using namespace rmdyn;

namespace {

struct CodeArgs {
  int r = -1;
  int n = -1;
  std::string variant;  // "1,2,3", "full" or empty
  std::string file;
};

void add_code_options(CLI::App* cmd, CodeArgs& a) {
  cmd->add_option("--r", a.r, "RM order");
  cmd->add_option("--n", a.n, "log2 of the length");
  cmd->add_option("--variant", a.variant, "comma-separated weight classes, 'full' or 'none'");
  cmd->add_option("--constraint", a.file, "constraint JSON (overrides --r/--n/--variant)");
}

Variant parse_variant(const std::string& text, const CodeSpec& spec) {
  if (text.empty() || text == "none") return {};
  if (text == "full") return full_variant(spec);
  Variant v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad variant entry '" + item + "'");
    }
  }
  return v;
}

Constraint load_code(const CodeArgs& a) {
  if (!a.file.empty()) return constraint_from_json(read_json_file(a.file));
  if (a.r < 0 || a.n < 0) throw ConfigError("need --r and --n, or --constraint");
  const CodeSpec spec = make_spec(a.r, a.n);
  return build_constraint(spec, parse_variant(a.variant, spec));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "'");
    }
  }
  return out;
}

std::string variant_text(const Variant& v) {
  if (v.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

unsigned default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

// construct

int cmd_construct(const CodeArgs& a, const std::string& out, bool matrices) {
  const Constraint c = load_code(a);
  const auto& s = c.spec;
  std::cout << "R(" << s.r << "," << s.n << ") N=" << s.length << " K=" << s.dimension << " rate=" << s.rate() << "\n";
  std::cout << "variant=" << variant_text(c.variant) << " dynamic=" << c.dynamic_count() << " D=" << max_dynamic_count(s);
  if (s.r > 0 && s.r < s.n) std::cout << " stable_variants=" << count_stable_variants(s);
  std::cout << "\n";
  if (matrices) std::cout << "V\n" << c.v << "W\n" << c.w;
  if (!out.empty()) write_text_file(out, constraint_to_json(c).dump(2) + "\n");
  return 0;
}

// stability

int cmd_stability(const CodeArgs& a, const std::string& group, std::size_t samples, std::uint64_t seed) {
  const Constraint c = load_code(a);
  const auto g = GroupDescriptor::parse(group);
  const auto rep = stability_survey(c, g, samples, seed);
  std::cout << "group=" << g.label << " samples=" << rep.samples << " stable=" << rep.stable << " fraction=" << rep.fraction()
            << "\n";
  for (const auto& p : rep.counterexamples) std::cout << "unstable:\n" << p.a << "b=" << detail::offset_bits(p) << "\n";
  return 0;
}

// memory

int cmd_memory(int r, int n, std::size_t m, const std::string& perm_file, const std::string& group, std::uint64_t seed) {
  const CodeSpec spec = make_spec(r, n);
  std::vector<AffinePerm> perms;
  if (!perm_file.empty()) {
    perms = perms_from_json(read_json_file(perm_file));
  } else if (m > 0) {
    perms = sample_group(GroupDescriptor::parse(group), n, m, seed);
  }
  std::cout << "R(" << r << "," << n << ") M=" << m << "\n";
  std::cout << "stable: " << memory_requirements(spec, m, MemoryScenario::kStable) << "\n";
  if (perms.empty()) {
    std::cout << "known_perms: 0\n";
  } else {
    const auto st = known_perm_storage(spec, perms);
    std::cout << "known_perms: " << st.dense_bits << " (nonzero " << st.nonzero_entries << ")\n";
  }
  std::cout << "unknown_perms: " << memory_requirements(spec, m, MemoryScenario::kUnknownPerms) << "\n";
  return 0;
}

// analyze

int cmd_analyze(const CodeArgs& a, const std::string& method, std::size_t list, std::size_t wmax, const std::string& ebn0,
                unsigned workers, const std::string& out) {
  const Constraint c = load_code(a);
  WeightSpectrum ws;
  if (method == "brute") {
    ws = brute_weight_enum(c, workers);
  } else if (method == "formula") {
    if (!c.variant.empty()) throw ConfigError("formula method only covers the plain RM code (empty variant)");
    ws.exact = false;
    ws.method = SpectrumMethod::kFormula;
    ws.counts[0] = 1;
    ws.counts[std::size_t{1} << (c.spec.n - c.spec.r)] = rm_minweight_count(c.spec.r, c.spec.n);
  } else if (method == "scl") {
    ws = low_weight_enum_scl(c, list, wmax);
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  const std::string text = spectrum_to_text(ws);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  if (!ebn0.empty()) {
    std::cout << "ebn0_db,union_bound\n" << std::setprecision(5);
    for (double e : parse_list(ebn0)) std::cout << e << "," << truncated_union_bound(ws, c.spec.rate(), e, wmax) << "\n";
  }
  return 0;
}

// simulate

struct RunOverrides {
  int workers = -1;
  long long seed = -1;
  long long min_errors = -1;
  long long max_trials = -1;
  std::string csv;
  std::string json_out;
};

DecoderConfig decoder_from_json(const json& d) {
  DecoderConfig cfg;
  const auto kind = d.value("kind", std::string("scl"));
  if (kind == "sc") {
    cfg.kind = DecoderKind::kSc;
  } else if (kind == "scl") {
    cfg.kind = DecoderKind::kScl;
  } else if (kind == "ae") {
    cfg.kind = DecoderKind::kAe;
  } else {
    throw ConfigError("unknown decoder kind '" + kind + "'");
  }
  cfg.list_size = d.value("list", std::size_t{16});
  cfg.ensemble = d.value("ensemble", std::size_t{8});
  cfg.group = GroupDescriptor::parse(d.value("group", std::string("blta_pl")));
  cfg.include_identity = d.value("include_identity", false);
  cfg.perm_seed = d.value("perm_seed", std::uint64_t{1});
  cfg.allow_unstable = d.value("allow_unstable", false);
  if (d.contains("perm_file")) cfg.perms = perms_from_json(read_json_file(d.at("perm_file").get<std::string>()));
  return cfg;
}

int run_campaign(const json& j, const RunOverrides& o) {
  try {
    const auto& code = j.at("code");
    const CodeSpec spec = make_spec(code.at("r").get<int>(), code.at("n").get<int>());
    Variant variant;
    if (code.contains("variant")) {
      const auto& v = code.at("variant");
      variant = v.is_string() ? parse_variant(v.get<std::string>(), spec) : v.get<Variant>();
    }
    const Constraint c = build_constraint(spec, variant);

    std::vector<DecoderConfig> decoders;
    if (j.contains("decoders")) {
      for (const auto& d : j.at("decoders")) decoders.push_back(decoder_from_json(d));
    } else {
      decoders.push_back(decoder_from_json(j.at("decoder")));
    }
    const auto ebn0s = j.at("ebn0_db").get<std::vector<double>>();

    StopRule stop;
    if (j.contains("stop")) {
      const auto& s = j.at("stop");
      stop.min_errors = s.value("min_errors", stop.min_errors);
      stop.max_trials = s.value("max_trials", stop.max_trials);
      stop.batch = s.value("batch", stop.batch);
    }
    if (o.min_errors >= 0) stop.min_errors = static_cast<std::uint64_t>(o.min_errors);
    if (o.max_trials >= 0) stop.max_trials = static_cast<std::uint64_t>(o.max_trials);
    std::uint64_t seed = j.value("seed", std::uint64_t{1});
    if (o.seed >= 0) seed = static_cast<std::uint64_t>(o.seed);
    unsigned workers = j.value("workers", 0U);
    if (o.workers >= 0) workers = static_cast<unsigned>(o.workers);
    if (workers == 0) workers = default_workers();

    std::string csv_path = o.csv;
    std::string json_path = o.json_out;
    if (j.contains("output")) {
      if (csv_path.empty()) csv_path = j.at("output").value("csv", std::string());
      if (json_path.empty()) json_path = j.at("output").value("json", std::string());
    }

    std::string csv = bler_csv_header();
    json records = json::array();
    std::cout << bler_csv_header() << std::flush;
    for (const auto& cfg : decoders) {
      const auto pts = run_bler(c, cfg, ebn0s, stop, seed, workers);
      const std::string rows = bler_to_csv(cfg.label(), pts);
      std::cout << rows << std::flush;
      csv += rows;
      for (auto& rec : bler_to_json(cfg.label(), pts)) records.push_back(rec);
    }
    if (!csv_path.empty()) write_text_file(csv_path, csv);
    if (!json_path.empty()) write_text_file(json_path, records.dump(2) + "\n");
    return 0;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("campaign: ") + e.what());
  }
}

// perms

int cmd_perms(int n, const std::string& group, std::size_t count, std::uint64_t seed, const std::string& out) {
  const auto perms = sample_group(GroupDescriptor::parse(group), n, count, seed);
  const std::string text = perms_to_json(perms, n).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

// repro

int repro_table1(std::size_t m, const std::string& group, std::uint64_t seed) {
  const int codes[][2] = {{3, 7}, {3, 8}, {4, 8}, {5, 8}};
  std::cout << "code,stable,known_perms_dense,known_perms_nonzero,unknown_perms\n";
  for (const auto& rn : codes) {
    const CodeSpec spec = make_spec(rn[0], rn[1]);
    const auto perms = sample_group(GroupDescriptor::parse(group), rn[1], m, seed);
    const auto st = known_perm_storage(spec, perms);
    std::cout << "R(" << rn[0] << "," << rn[1] << ")," << memory_requirements(spec, m, MemoryScenario::kStable) << ","
              << st.dense_bits << "," << st.nonzero_entries << ","
              << memory_requirements(spec, m, MemoryScenario::kUnknownPerms) << "\n";
  }
  return 0;
}

int repro_fig1(const RunOverrides& o, const std::string& ebn0) {
  json curves = json::array();
  const std::vector<std::pair<std::string, std::string>> codes = {{"V_0", "none"}, {"V_d", "3"}, {"V_D", "full"}};
  RunOverrides ov = o;
  std::string csv;
  for (const auto& [name, variant] : codes) {
    std::cout << "# " << name << "\n";
    json j = {{"code", {{"r", 3}, {"n", 7}, {"variant", variant}}},
              {"decoders", {{{"kind", "scl"}, {"list", 16}}, {{"kind", "ae"}, {"list", 16}, {"ensemble", 8}}}},
              {"ebn0_db", parse_list(ebn0)},
              {"stop", {{"min_errors", 100}, {"max_trials", 1000000}}}};
    ov.csv = o.csv.empty() ? "" : o.csv + "." + name + ".csv";
    ov.json_out.clear();
    run_campaign(j, ov);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reed-Muller codes with stable dynamic frozen bits: construction, analysis, simulation"};
  app.require_subcommand(1);

  CodeArgs code;
  std::string out;
  bool matrices = false;
  auto* construct = app.add_subcommand("construct", "build a constraint and print a summary");
  add_code_options(construct, code);
  construct->add_option("--out", out, "write the constraint JSON here");
  construct->add_flag("--matrices", matrices, "print V and W");

  std::string group = "blta_pl";
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  auto* stability = app.add_subcommand("stability", "check sampled permutations against a constraint");
  add_code_options(stability, code);
  stability->add_option("--group", group, "identity|pl|blta_pl|lta|ga|blta:s1,s2,...");
  stability->add_option("--samples", samples);
  stability->add_option("--seed", seed);

  std::size_t m = 8;
  std::string perm_file;
  auto* memory = app.add_subcommand("memory", "constraint storage under the three scenarios");
  memory->add_option("--r", code.r)->required();
  memory->add_option("--n", code.n)->required();
  memory->add_option("--M", m, "ensemble size");
  memory->add_option("--perms", perm_file, "permutation JSON for the known-permutation scenario");
  std::string mem_group = "lta";
  memory->add_option("--group", mem_group, "group sampled when no permutation file is given");
  memory->add_option("--seed", seed);

  std::string method = "brute";
  std::size_t list = 1024;
  std::size_t wmax = 20;
  std::string ebn0;
  unsigned workers = default_workers();
  auto* analyze = app.add_subcommand("analyze", "weight spectrum and truncated union bound");
  add_code_options(analyze, code);
  analyze->add_option("--method", method, "brute|formula|scl");
  analyze->add_option("--list", list, "list size for the scl method");
  analyze->add_option("--wmax", wmax);
  analyze->add_option("--ebn0", ebn0, "comma-separated Eb/N0 values (dB) for the bound table");
  analyze->add_option("--workers", workers);
  analyze->add_option("--out", out, "write the spectrum here");

  std::string config;
  RunOverrides ov;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo BLER campaign");
  simulate->add_option("--config", config, "campaign JSON")->required();
  simulate->add_option("--workers", ov.workers);
  simulate->add_option("--seed", ov.seed);
  simulate->add_option("--min-errors", ov.min_errors);
  simulate->add_option("--max-trials", ov.max_trials);
  simulate->add_option("--csv", ov.csv);
  simulate->add_option("--json", ov.json_out);

  std::size_t count = 8;
  auto* perms = app.add_subcommand("perms", "sample automorphisms");
  perms->add_option("--n", code.n)->required();
  perms->add_option("--group", group);
  perms->add_option("--count", count);
  perms->add_option("--seed", seed);
  perms->add_option("--out", out);

  auto* repro = app.add_subcommand("repro", "regenerate a table or figure");
  repro->require_subcommand(1);
  auto* table1 = repro->add_subcommand("table1", "memory table");
  table1->add_option("--M", m);
  table1->add_option("--group", mem_group);
  table1->add_option("--seed", seed);
  std::string grid = "1,1.5,2,2.5,3,3.5";
  auto* fig1 = repro->add_subcommand("fig1", "BLER curves for R(3,7)");
  fig1->add_option("--ebn0", grid);
  fig1->add_option("--workers", ov.workers);
  fig1->add_option("--seed", ov.seed);
  fig1->add_option("--min-errors", ov.min_errors);
  fig1->add_option("--max-trials", ov.max_trials);
  fig1->add_option("--csv", ov.csv, "prefix for per-code CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*construct) return cmd_construct(code, out, matrices);
    if (*stability) return cmd_stability(code, group, samples, seed);
    if (*memory) return cmd_memory(code.r, code.n, m, perm_file, mem_group, seed);
    if (*analyze) return cmd_analyze(code, method, list, wmax, ebn0, workers, out);
    if (*simulate) return run_campaign(read_json_file(config), ov);
    if (*perms) return cmd_perms(code.n, group, count, seed, out);
    if (*table1) return repro_table1(m, mem_group, seed);
    if (*fig1) return repro_fig1(ov, grid);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
