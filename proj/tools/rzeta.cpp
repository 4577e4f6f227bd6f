// Command-line driver: iterate counts as CSV, zeta windows with rational
// reconstruction, and full dichotomy classification reports as JSON.
//
//   rzeta rnum <instance.json>      rows n,R_n (exact; "inf" for infinite)
//   rzeta zeta <instance.json>      series + reconstruction outcome
//   rzeta classify <instance.json>  verdict + certificate + evidence
//
// Exit codes: 0 success, 2 parse error, 3 invariant violation or internal
// inconsistency, 4 zeta window hit an infinite count.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rzeta/classify.hpp"
#include "rzeta/instance.hpp"

namespace {

rzeta::Instance load_instance(const std::string& path, rzeta::Policy* policy,
                              bool max_n_set, bool window_set, bool samples_set,
                              const rzeta::Policy& cli) {
  std::ifstream in(path);
  if (!in) throw rzeta::parse_error("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  rzeta::Instance inst = rzeta::parse_instance_text(buf.str());
  *policy = inst.options;
  if (max_n_set) policy->max_n = cli.max_n;
  if (window_set) policy->window = cli.window;
  if (samples_set) policy->samples = cli.samples;
  return inst;
}

int cmd_rnum(const rzeta::Instance& inst, const rzeta::Policy& policy,
             const std::string& format) {
  auto seq = rzeta::reidemeister_sequence(inst, policy.max_n);
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < seq.size(); ++i)
      rows.push_back(nlohmann::json{{"n", i + 1}, {"R", seq[i].str()}});
    std::cout << nlohmann::json{{"kind", rzeta::kind_name(inst.kind)},
                                {"rows", rows}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "n,R_n\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
      std::cout << (i + 1) << "," << seq[i].str() << "\n";
  }
  return 0;
}

int cmd_zeta(const rzeta::Instance& inst, const rzeta::Policy& policy,
             const std::string& format) {
  unsigned long w = std::max<unsigned long>(8, policy.window);
  auto seq = rzeta::reidemeister_sequence(inst, w);
  rzeta::QSeries series = rzeta::zeta_series(seq, w);  // throws not_tame_error
  if (format == "csv") {
    std::cout << "n,R_n\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
      std::cout << (i + 1) << "," << seq[i].str() << "\n";
    return 0;
  }
  nlohmann::json j;
  j["kind"] = rzeta::kind_name(inst.kind);
  j["window"] = w;
  nlohmann::json rvals = nlohmann::json::array();
  for (const auto& r : seq) rvals.push_back(r.str());
  j["r_values"] = std::move(rvals);
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : series.coeffs()) coeffs.push_back(c.get_str());
  j["series"] = std::move(coeffs);
  auto rec = rzeta::pade_reconstruct(series);
  if (rec) {
    j["reconstruction"] = "rational";
    j["zeta"] = rzeta::detail::rational_fn_to_json(*rec);
  } else {
    j["reconstruction"] = "no_stabilize";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_classify(const rzeta::Instance& inst, const rzeta::Policy& policy) {
  rzeta::DichotomyReport rep = rzeta::classify_instance(inst, policy);
  std::cout << rzeta::report_to_json(rep).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Reidemeister zeta toolkit"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "default";
  rzeta::Policy cli;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "instance JSON file")->required();
    sub->add_option("--max-n", cli.max_n, "largest iterate for count listings");
    sub->add_option("--window", cli.window, "zeta series window");
    sub->add_option("--samples", cli.samples, "verified multipliers per certificate level");
    sub->add_option("--format", format, "output format: json or csv");
  };

  CLI::App* rnum = app.add_subcommand("rnum", "iterate counts n, R(n)");
  add_common(rnum);
  CLI::App* zeta = app.add_subcommand("zeta", "zeta series and reconstruction");
  add_common(zeta);
  CLI::App* classify = app.add_subcommand("classify", "dichotomy report");
  add_common(classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    rzeta::Policy policy;
    rzeta::Instance inst =
        load_instance(file, &policy, rnum->count("--max-n") || zeta->count("--max-n") ||
                                         classify->count("--max-n"),
                      rnum->count("--window") || zeta->count("--window") ||
                          classify->count("--window"),
                      rnum->count("--samples") || zeta->count("--samples") ||
                          classify->count("--samples"),
                      cli);
    if (rnum->parsed()) return cmd_rnum(inst, policy, format == "default" ? "csv" : format);
    if (zeta->parsed()) return cmd_zeta(inst, policy, format == "default" ? "json" : format);
    if (classify->parsed()) {
      if (format != "default" && format != "json") {
        std::cerr << "error: classify reports are JSON only\n";
        return 2;
      }
      return cmd_classify(inst, policy);
    }
  } catch (const rzeta::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const rzeta::not_tame_error& e) {
    std::cerr << "not tame: " << e.what() << "\n";
    return 4;
  } catch (const rzeta::invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
