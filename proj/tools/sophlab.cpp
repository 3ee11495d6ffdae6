#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selftest.hpp"
#include "sophlab/bits.hpp"
#include "sophlab/enumerate.hpp"
#include "sophlab/errors.hpp"
#include "sophlab/eval.hpp"
#include "sophlab/models.hpp"
#include "sophlab/rational.hpp"
#include "sophlab/snapshot.hpp"
#include "sophlab/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sophlab;

namespace {

std::string utc_now() {
  std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex16(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Everything a command prints: deterministic comment notes, a column header,
// and data rows. The timestamp lives in its own comment line so suppressing
// it with --no-header makes reruns byte-identical.
struct Output {
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Options {
  Budgets budgets;
  uint32_t c = 0;
  unsigned workers = 1;
  fs::path cache_dir;
  std::string format = "csv";
  bool no_header = false;
  bool verbose = false;
};

void emit(const Output& o, const Options& opt, const std::string& command) {
  if (opt.format == "json") {
    json doc;
    doc["command"] = command;
    doc["notes"] = o.notes;
    doc["columns"] = o.columns;
    doc["rows"] = json::array();
    for (const auto& row : o.rows) doc["rows"].push_back(row);
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (!opt.no_header)
    std::cout << "# sophlab " << command << " " << utc_now() << "\n";
  for (const auto& n : o.notes) std::cout << "# " << n << "\n";
  if (!o.columns.empty()) {
    for (std::size_t i = 0; i < o.columns.size(); ++i)
      std::cout << (i ? "," : "") << o.columns[i];
    std::cout << "\n";
  }
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::cout << (i ? "," : "") << row[i];
    std::cout << "\n";
  }
}

fs::path snapshot_path(const Options& opt) {
  return opt.cache_dir / snapshot::content_file_name(opt.budgets, Bits{});
}

enumerate::ComplexityTable require_snapshot(const Options& opt) {
  fs::path p = snapshot_path(opt);
  if (!fs::exists(p))
    throw MissingSnapshotError("no snapshot for this configuration: " +
                               p.string() + " (run `sophlab build` first)");
  return snapshot::load_table(p);
}

int cmd_build(const Options& opt) {
  fs::create_directories(opt.cache_dir);
  fs::path p = snapshot_path(opt);
  auto t0 = std::chrono::steady_clock::now();
  bool hit = fs::exists(p);
  enumerate::ComplexityTable t =
      hit ? snapshot::load_table(p)
          : enumerate::build_table(opt.budgets, {}, {.workers = opt.workers});
  if (!hit) snapshot::save_table(t, p);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();

  uint32_t max_k = 0;
  for (const auto& [x, e] : t.entries) max_k = std::max(max_k, e.k);
  if (!opt.no_header)
    std::cout << "# sophlab build " << utc_now() << " elapsed_ms=" << ms
              << " cache=" << (hit ? "hit" : "miss") << "\n";
  std::cout << "entries=" << t.entries.size()
            << " kraft=" << to_string(t.kraft) << " max_k=" << max_k
            << " digest=" << hex16(snapshot::table_digest(t))
            << " file=" << p.string() << "\n";
  return 0;
}

int cmd_query_k(const Options& opt, const Bits& x) {
  auto t = require_snapshot(opt);
  const auto* e = t.find(x);
  if (!e) throw UnknownStringError(x);
  Output o;
  o.columns = {"x", "k", "witness_q", "witness_d", "optimal_count"};
  o.rows.push_back({x, std::to_string(e->k), e->witness_program,
                    e->witness_data, std::to_string(e->optimal_count)});
  emit(o, opt, "query k");
  return 0;
}

int cmd_query_soph(const Options& opt, const Bits& x) {
  auto t = require_snapshot(opt);
  auto r = stats::sophistication(t, x, {opt.c});
  Output o;
  o.columns = {"x", "k", "c", "soph", "witness_q", "witness_d"};
  o.rows.push_back({x, std::to_string(r.k), std::to_string(r.c_used),
                    std::to_string(r.soph), encode_program(r.witness_program),
                    r.witness_data});
  emit(o, opt, "query soph");
  return 0;
}

int cmd_query_structfn(const Options& opt, const Bits& x) {
  auto t = require_snapshot(opt);
  auto curve = stats::structure_lambda(t, x);
  Output o;
  o.columns = {"x", "alpha", "lambda", "h"};
  for (const auto& pt : curve)
    o.rows.push_back({x, std::to_string(pt.alpha),
                      pt.lambda ? std::to_string(*pt.lambda) : "",
                      pt.h ? std::to_string(*pt.h) : ""});
  emit(o, opt, "query structfn");
  return 0;
}

int cmd_query_deficiency(const Options& opt, const Bits& x,
                         const fs::path& model_path,
                         std::optional<uint32_t> radius) {
  auto t = require_snapshot(opt);
  models::Model m = models::load_model(model_path);
  std::optional<models::Distortion> r;
  if (radius) r = models::Distortion::from_bits(*radius);
  auto d = models::deficiency(t, x, m, r, opt.budgets, opt.workers);
  models::Distortion used =
      r ? *r : models::distortion(x, m, opt.budgets);
  Output o;
  o.notes.push_back(
      "k_hat is an upper bound on the conditional complexity, so delta is a "
      "lower bound on the true atypicality");
  o.columns = {"x", "radius_bits", "ball_size", "k_hat", "k_hat_source",
               "delta"};
  o.rows.push_back({x, fixed6(used.bits()), std::to_string(d.ball_size),
                    std::to_string(d.k_hat),
                    d.via_index_code ? "index" : "table", fixed6(d.delta)});
  emit(o, opt, "query deficiency");
  return 0;
}

int cmd_query_mutual(const Options& opt, const Bits& x, const Bits& y,
                     const std::string& mode_name) {
  require_snapshot(opt);  // consistency: queries need a built configuration
  auto mode = mode_name == "witness" ? stats::MutualMode::AuxIsWitnessPair
                                     : stats::MutualMode::AuxIsString;
  enumerate::TableCache cache(opt.budgets, {.workers = opt.workers});
  int64_t i = stats::mutual_info(cache, x, y, mode);
  auto base = cache.table_for({});
  const auto* ey = base->find(y);
  Output o;
  o.columns = {"x", "y", "aux_mode", "k_y", "k_y_cond", "mutual"};
  o.rows.push_back({x, y, mode_name, std::to_string(ey->k),
                    std::to_string(static_cast<int64_t>(ey->k) - i),
                    std::to_string(i)});
  emit(o, opt, "query mutual");
  return 0;
}

int cmd_query_maxsoph(const Options& opt, uint32_t n) {
  auto t = require_snapshot(opt);
  auto r = stats::max_soph_of_length(t, n, {opt.c}, opt.workers);
  Output o;
  o.columns = {"n", "x", "soph", "k", "c_used", "skipped"};
  o.rows.push_back({std::to_string(n), r.x, std::to_string(r.result.soph),
                    std::to_string(r.result.k),
                    std::to_string(r.result.c_used),
                    std::to_string(r.skipped)});
  emit(o, opt, "query maxsoph");
  return 0;
}

int cmd_convert(const Options& opt, const fs::path& in, const std::string& to,
                const fs::path& out_path, const std::optional<Bits>& x) {
  models::Model m = models::load_model(in);
  Output o;
  o.notes.push_back("model_dl_in=" + std::to_string(models::model_dl(m)));
  models::Model result;

  if (to == "pmf") {
    const auto* s = std::get_if<models::FiniteSetModel>(&m);
    if (!s) throw BadInputError("convert --to pmf expects a set model");
    auto p = models::set_to_pmf(*s);
    o.notes.push_back("set_size=" + std::to_string(s->elements.size()));
    o.notes.push_back(
        "log2_set_size=" +
        fixed6(models::Distortion::from_scale(
                   Rational(static_cast<long long>(s->elements.size())))
                   .bits()));
    o.notes.push_back(
        "ceil_log2_inv_p=" +
        std::to_string(ceil_log2(
            Rational(static_cast<long long>(s->elements.size())))));
    result = p;
  } else if (to == "func") {
    const auto* p = std::get_if<models::PmfModel>(&m);
    if (!p) throw BadInputError("convert --to func expects a pmf model");
    auto f = models::pmf_to_func(*p);
    const auto& table = std::get<models::CodeTable>(f.fn);
    for (const auto& [cw, val] : table.rows) {
      const Rational* prob = p->probability(val);
      o.notes.push_back("code value=" + val + " codeword=" + cw +
                        " len=" + std::to_string(cw.size()) +
                        " ceil_log2_inv_p=" +
                        std::to_string(ceil_log2(Rational(1) / *prob)));
    }
    result = f;
  } else if (to == "set") {
    const auto* f = std::get_if<models::FuncModel>(&m);
    if (!f) throw BadInputError("convert --to set expects a func model");
    if (!x) throw BadInputError("convert --to set requires --x");
    auto d = models::distortion(*x, *f, opt.budgets);
    auto s = models::func_to_set(*f, *x, opt.budgets);
    o.notes.push_back("radius_bits=" + fixed6(d.bits()));
    o.notes.push_back("set_size=" + std::to_string(s.elements.size()));
    o.notes.push_back(
        "log2_set_size=" +
        fixed6(models::Distortion::from_scale(
                   Rational(static_cast<long long>(s.elements.size())))
                   .bits()));
    result = s;
  } else {
    throw BadInputError("unknown conversion target: " + to);
  }

  o.notes.push_back("model_dl_out=" + std::to_string(models::model_dl(result)));
  models::save_model(result, out_path);
  o.notes.push_back("wrote " + out_path.string());
  emit(o, opt, "convert");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sophlab: exact two-part complexity laboratory for a bounded "
               "prefix machine"};
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(0, 1);

  uint32_t pair_bits = Budgets{}.max_pair_bits;
  uint32_t program_bits = 0, data_bits = 0;
  uint64_t steps = Budgets{}.max_steps;
  uint32_t string_len = Budgets{}.max_string_len;
  Options opt;
  std::string cache_dir = ".sophlab-cache";

  app.add_option("--pair-bits", pair_bits, "bound on l(q)+l(d)")
      ->check(CLI::Range(2u, 62u));
  auto* opt_program =
      app.add_option("--program-bits", program_bits,
                     "bound on l(q); defaults to --pair-bits");
  auto* opt_data = app.add_option("--data-bits", data_bits,
                                  "bound on l(d); defaults to --pair-bits");
  app.add_option("--steps", steps, "evaluation cost bound");
  app.add_option("--string-len", string_len, "longest string eval may build");
  app.add_option("--workers", opt.workers, "worker thread count")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--c", opt.c, "sufficiency slack in bits");
  app.add_option("--cache-dir", cache_dir, "snapshot cache directory")
      ->envname("SOPHLAB_CACHE_DIR");
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--no-header", opt.no_header,
               "suppress the timestamp comment line");
  app.add_flag("--verbose", opt.verbose, "print the resolved configuration");

  auto* build = app.add_subcommand("build", "build and cache a table");
  auto* query = app.add_subcommand("query", "query a cached table");
  auto* convert = app.add_subcommand("convert", "convert between model files");
  auto* selftest = app.add_subcommand("selftest", "run the invariant audit");
  for (auto* s : {build, query, convert, selftest}) s->fallthrough();

  std::string x_text, y_text;
  uint32_t maxsoph_n = 0;
  std::string model_path, in_path, out_path, to;
  int64_t radius = -1;
  std::string aux_mode = "string";
  query->add_option("--x", x_text, "query string (bits)");
  query->add_option("--y", y_text, "second string for mutual (bits)");
  query->add_option("--n", maxsoph_n, "string length for maxsoph");
  query->add_option("--model", model_path, "model file for deficiency");
  query->add_option("--radius", radius, "explicit ball radius in bits")
      ->check(CLI::Range(int64_t{0}, int64_t{62}));
  query->add_option("--aux-mode", aux_mode, "conditioning side of mutual")
      ->check(CLI::IsMember({"string", "witness"}));
  auto* q_k = query->add_subcommand("k", "complexity and canonical witness");
  auto* q_soph = query->add_subcommand("soph", "sophistication at slack c");
  auto* q_struct = query->add_subcommand("structfn", "structure function");
  auto* q_def = query->add_subcommand("deficiency", "randomness deficiency");
  auto* q_mutual = query->add_subcommand("mutual", "mutual information");
  auto* q_maxsoph =
      query->add_subcommand("maxsoph", "max sophistication at a length");
  for (auto* s : {q_k, q_soph, q_struct, q_def, q_mutual, q_maxsoph})
    s->fallthrough();
  query->require_subcommand(1, 1);

  std::string convert_x;
  convert->add_option("--in", in_path, "input model file")->required();
  convert->add_option("--to", to, "target model kind")
      ->required()
      ->check(CLI::IsMember({"set", "pmf", "func"}));
  convert->add_option("--out", out_path, "output model file")->required();
  auto* opt_convert_x =
      convert->add_option("--x", convert_x, "anchor string for func-to-set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    opt.budgets.max_pair_bits = pair_bits;
    opt.budgets.max_program_bits =
        opt_program->count() ? program_bits : pair_bits;
    opt.budgets.max_data_bits = opt_data->count() ? data_bits : pair_bits;
    opt.budgets.max_steps = steps;
    opt.budgets.max_string_len = string_len;
    opt.budgets.validate();
    opt.cache_dir = cache_dir;

    if (opt.verbose)
      std::cout << "# config pair-bits=" << opt.budgets.max_pair_bits
                << " program-bits=" << opt.budgets.max_program_bits
                << " data-bits=" << opt.budgets.max_data_bits
                << " steps=" << opt.budgets.max_steps
                << " string-len=" << opt.budgets.max_string_len
                << " workers=" << opt.workers << " c=" << opt.c
                << " cache-dir=" << cache_dir << " format=" << opt.format
                << "\n";

    if (build->parsed()) return cmd_build(opt);
    if (selftest->parsed()) {
      const char* flip = std::getenv("SOPHLAB_SELFTEST_FLIP_ISA");
      return cli::run_selftest(std::cout, flip && flip[0] == '1');
    }
    if (convert->parsed()) {
      std::optional<Bits> x;
      if (opt_convert_x->count()) x = bits::parse(convert_x);
      return cmd_convert(opt, in_path, to, out_path, x);
    }
    if (query->parsed()) {
      bool has_x = query->count("--x") > 0;
      Bits x = has_x ? bits::parse(x_text) : Bits{};
      if (q_k->parsed() || q_soph->parsed() || q_struct->parsed() ||
          q_def->parsed() || q_mutual->parsed()) {
        if (!has_x) throw BadInputError("--x is required for this query");
      }
      if (q_k->parsed()) return cmd_query_k(opt, x);
      if (q_soph->parsed()) return cmd_query_soph(opt, x);
      if (q_struct->parsed()) return cmd_query_structfn(opt, x);
      if (q_def->parsed()) {
        if (model_path.empty())
          throw BadInputError("--model is required for deficiency");
        std::optional<uint32_t> r;
        if (radius >= 0) r = static_cast<uint32_t>(radius);
        return cmd_query_deficiency(opt, x, model_path, r);
      }
      if (q_mutual->parsed())
        return cmd_query_mutual(opt, x, bits::parse(y_text), aux_mode);
      if (q_maxsoph->parsed()) {
        if (!query->count("--n"))
          throw BadInputError("--n is required for maxsoph");
        return cmd_query_maxsoph(opt, maxsoph_n);
      }
    }
    std::cout << app.help();
    return 0;
  } catch (const MissingSnapshotError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
