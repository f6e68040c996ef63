// carpetq: construct, certify and render optimal quantizers of the
// self-similar measure on the Sierpinski carpet.
//
// Machine-readable output goes to stdout, logs to stderr. Exit codes:
// 0 success, 2 invalid input (bad t/variants/words), 3 unwritable output.

#include <carpetq/carpetq.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace carpetq;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_optimal(long long n, const std::string& t_arg, const std::string& variants_arg,
                std::size_t limit, const std::string& format) {
  try {
    std::vector<Codebook> books;
    std::vector<std::optional<Decomposition>> decs;
    auto record = [&](Codebook cb, std::vector<Word> t) {
      books.push_back(std::move(cb));
      if (n >= 4) {
        Decomposition d = decompose(Int(n));
        d.t = std::move(t);
        decs.push_back(std::move(d));
      } else {
        decs.push_back(std::nullopt);
      }
    };

    bool single = false;
    if (!t_arg.empty() || !variants_arg.empty()) {
      std::vector<Word> t;
      for (const auto& w : split_csv(t_arg)) t.push_back(Word(w));
      if (!variants_arg.empty()) {
        // explicit variants -> exactly one document
        VariantMap vm;
        for (const auto& item : split_csv(variants_arg)) {
          auto colon = item.find(':');
          if (colon == std::string::npos)
            vm[Word{}] = static_cast<unsigned>(std::stoul(item));
          else
            vm[Word(item.substr(0, colon))] =
                static_cast<unsigned>(std::stoul(item.substr(colon + 1)));
        }
        record(optimal_set(Int(n), t, vm), t);
        single = true;
      } else {
        // fixed t -> enumerate its variant family in mixed-radix order
        optimal_set(Int(n), t);  // validates t up front
        Decomposition d = decompose(Int(n));
        auto words = words_of_length(d.level);
        std::vector<unsigned> radix(words.size()), digits(words.size(), 0);
        for (std::size_t i = 0; i < words.size(); ++i) {
          bool in_t = std::find(t.begin(), t.end(), words[i]) != t.end();
          radix[i] = base_variant_count(in_t ? d.m + 1 : d.m);
        }
        do {
          VariantMap vm;
          for (std::size_t i = 0; i < words.size(); ++i)
            if (digits[i] != 0) vm[words[i]] = digits[i];
          record(optimal_set(Int(n), t, vm), t);
        } while (books.size() < limit && carpetq::detail::advance_variants(digits, radix));
      }
    } else {
      for (auto& e : enumerate_optimal_sets(Int(n), limit))
        record(std::move(e.codebook), std::move(e.t));
    }

    if (format == "csv") {
      std::cout << "set_index,point_index,x,y\n";
      for (std::size_t s = 0; s < books.size(); ++s)
        for (std::size_t i = 0; i < books[s].size(); ++i)
          std::cout << s << ',' << i << ',' << format_rational(books[s][i].x) << ','
                    << format_rational(books[s][i].y) << '\n';
    } else if (single) {
      std::cout << document_to_json(make_document(books[0], "constructed", decs[0])).dump(2)
                << '\n';
    } else {
      Json out = Json::array();
      for (std::size_t s = 0; s < books.size(); ++s)
        out.push_back(document_to_json(make_document(books[s], "constructed", decs[s])));
      std::cout << out.dump(2) << '\n';
    }
    std::cerr << "optimal: emitted " << books.size() << " set(s); total count "
              << optimal_count(Int(n)) << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_error(const std::string& n_list) {
  std::vector<Int> ns;
  try {
    for (const auto& tok : split_csv(n_list)) ns.push_back(Int(tok));
    if (ns.empty()) throw std::invalid_argument("empty n list");
    for (const Int& n : ns)
      if (n < 1) throw std::invalid_argument("n must be >= 1");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  write_error_csv(std::cout, ns);
  return 0;
}

int cmd_lloyd(unsigned n, unsigned depth, unsigned restarts, std::uint64_t seed,
              unsigned max_iter) {
  OracleConfig config{n, depth, restarts, seed, max_iter};
  try {
    OracleResult res = brute_force(config);
    Json j;
    j["config"] = {{"n", n},
                   {"depth", depth},
                   {"restarts", restarts},
                   {"seed", seed},
                   {"max_iter", max_iter}};
    j["best"] = document_to_json(make_document(res.best.codebook, "lloyd"));
    j["best"]["distortion"] = format_rational(res.best.distortion);
    j["best"]["iterations"] = res.best.iterations;
    j["best"]["converged"] = res.best.converged;
    j["corrected_distortion"] = format_rational(res.corrected_distortion);
    j["corrected_decimal"] = decimal_string(res.corrected_distortion);
    if (res.matched_optimal)
      j["matched_optimal"] = *res.matched_optimal;
    else
      j["matched_optimal"] = nullptr;
    j["degenerate_restarts"] = res.degenerate_restarts;
    j["restarts_at_best"] = res.restarts_at_best;
    j["best_restart_index"] = res.best_restart_index;
    std::cout << j.dump(2) << '\n';
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_dimension(unsigned levels) {
  std::vector<unsigned> ls;
  for (unsigned l = 1; l <= levels; ++l) ls.push_back(l);
  write_dimension_csv(std::cout, ls);
  return 0;
}

int cmd_coefficient(const std::string& levels, unsigned grid, const std::string& format) {
  try {
    unsigned level_min = 1, level_max = 1;
    auto colon = levels.find(':');
    if (colon == std::string::npos) {
      level_min = level_max = static_cast<unsigned>(std::stoul(levels));
    } else {
      level_min = static_cast<unsigned>(std::stoul(levels.substr(0, colon)));
      level_max = static_cast<unsigned>(std::stoul(levels.substr(colon + 1)));
    }
    ProfileReport report = scaled_profile(level_min, level_max, grid);
    if (format == "json") {
      Json j;
      j["inf_observed"] = report.inf_observed;
      j["sup_observed"] = report.sup_observed;
      j["limit_curve_max"] = limit_curve_max();
      Json samples = Json::array();
      for (const auto& s : report.samples) {
        samples.push_back({{"ell", s.level},
                           {"n", s.n.str()},
                           {"x", s.x},
                           {"v_n", format_rational(s.v_n)},
                           {"scaled", s.scaled},
                           {"g_or_h", s.limit},
                           {"f_paper", s.published}});
      }
      j["samples"] = samples;
      Json dims = Json::array();
      for (const auto& [n, est] : report.dimension_estimates)
        dims.push_back({{"n", n.str()}, {"estimate", est}});
      j["dimension_estimates"] = dims;
      std::cout << j.dump(2) << '\n';
    } else {
      write_profile_csv(std::cout, report);
      std::cerr << "coefficient: inf_observed=" << decimal_string(report.inf_observed)
                << " sup_observed=" << decimal_string(report.sup_observed)
                << " spread=" << decimal_string(report.sup_observed - report.inf_observed)
                << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_render(long long n, const std::string& input, unsigned depth, const std::string& out) {
  Codebook cb;
  try {
    if (!input.empty()) {
      std::ifstream is(input);
      if (!is) throw std::invalid_argument("cannot read '" + input + "'");
      Json j = Json::parse(is);
      cb = codebook_from_document(document_from_json(j));
    } else {
      if (n < 1) throw std::invalid_argument("--n must be >= 1 (or pass --in)");
      if (n <= 3) {
        cb = base_set(static_cast<int>(n), 0);
      } else {
        Decomposition d = decompose(Int(n));
        auto words = words_of_length(d.level);
        std::vector<Word> t(words.begin(), words.begin() + static_cast<std::size_t>(d.k));
        cb = optimal_set(Int(n), t);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot write '" << out << "'\n";
    return 3;
  }
  try {
    render_svg(os, cb, depth);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  os.flush();
  if (!os) {
    std::cerr << "error: write to '" << out << "' failed\n";
    return 3;
  }
  std::cerr << "render: wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal quantizers of the Sierpinski carpet measure"};
  app.require_subcommand(1);

  auto* opt = app.add_subcommand("optimal", "construct/enumerate optimal n-point sets");
  long long opt_n = 0;
  std::string opt_t, opt_variants, opt_format = "json";
  std::size_t opt_limit = 16;
  opt->add_option("--n", opt_n, "number of points")->required();
  opt->add_option("--t", opt_t, "comma-separated level words receiving an extra point");
  opt->add_option("--variants", opt_variants, "word:variant pairs (bare index for n <= 3)");
  opt->add_option("--limit", opt_limit, "maximum number of enumerated sets");
  opt->add_option("--format", opt_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* err = app.add_subcommand("error", "closed-form quantization errors as CSV");
  std::string err_ns;
  err->add_option("--n", err_ns, "comma-separated list of n values")->required();

  auto* lloyd = app.add_subcommand("lloyd", "multi-start Lloyd oracle on a depth-k atom measure");
  unsigned ll_n = 2, ll_depth = 5, ll_restarts = 64, ll_max_iter = 200;
  std::uint64_t ll_seed = 0;
  lloyd->add_option("--n", ll_n, "number of points")->required();
  lloyd->add_option("--depth", ll_depth, "atom depth k");
  lloyd->add_option("--restarts", ll_restarts, "number of seeded restarts");
  lloyd->add_option("--seed", ll_seed, "64-bit seed");
  lloyd->add_option("--max-iter", ll_max_iter, "iteration cap per restart");

  auto* dim = app.add_subcommand("dimension", "dimension estimates at n = 4^ell");
  unsigned dim_levels = 12;
  dim->add_option("--levels", dim_levels, "largest level");

  auto* coef = app.add_subcommand("coefficient", "scaled error profile over [1,4) per level");
  std::string c_levels = "10";
  unsigned c_grid = 64;
  std::string c_format = "csv";
  coef->add_option("--levels", c_levels, "level or lmin:lmax range");
  coef->add_option("--grid", c_grid, "x-grid points per level");
  coef->add_option("--format", c_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* render = app.add_subcommand("render", "draw carpet levels plus a codebook as SVG");
  long long r_n = 0;
  std::string r_in, r_out = "out.svg";
  unsigned r_depth = 3;
  render->add_option("--n", r_n, "render the canonical optimal n-point set");
  render->add_option("--in", r_in, "codebook document JSON to render instead");
  render->add_option("--carpet-depth", r_depth, "carpet recursion depth (<= 7)");
  render->add_option("--out", r_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  if (opt->parsed()) return cmd_optimal(opt_n, opt_t, opt_variants, opt_limit, opt_format);
  if (err->parsed()) return cmd_error(err_ns);
  if (lloyd->parsed()) return cmd_lloyd(ll_n, ll_depth, ll_restarts, ll_seed, ll_max_iter);
  if (dim->parsed()) return cmd_dimension(dim_levels);
  if (coef->parsed()) return cmd_coefficient(c_levels, c_grid, c_format);
  if (render->parsed()) return cmd_render(r_n, r_in, r_depth, r_out);
  return 1;
}
