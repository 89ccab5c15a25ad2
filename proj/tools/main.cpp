#include "poskb/det.hpp"
#include "poskb/inference.hpp"
#include "poskb/skb.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 success / entailed, 1 not-entailed (or validation failed),
// 2 any error (I/O, format, usage).
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

struct Options {
  std::string kb_path;
  std::string out_path;
  bool quiet = false;
};

std::ostream& info(const Options& opt) {
  static std::ofstream null_sink;
  if (opt.quiet) {
    if (!null_sink.is_open()) null_sink.setstate(std::ios_base::badbit);
    return null_sink;
  }
  return std::cout;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw poskb::Error("cannot write '" + path + "'");
  out << content;
}

poskb::StratifiedKB require_kb(const Options& opt) {
  if (opt.kb_path.empty()) throw poskb::Error("--kb is required");
  return poskb::load_kb_file(opt.kb_path);
}

int run_learn(const Options& opt, const std::string& data_path, int max_depth,
              std::size_t min_leaf_rows) {
  poskb::DataSet data = poskb::load_csv_file(data_path);
  unsigned depth_cap = max_depth < 0 ? static_cast<unsigned>(data.vocab.size())
                                     : static_cast<unsigned>(max_depth);
  poskb::DensityTree tree = poskb::learn_tree(data, depth_cap, min_leaf_rows);
  if (opt.out_path.empty()) throw poskb::Error("--out is required");
  write_file(opt.out_path, poskb::tree_to_json(tree));

  info(opt) << "leaves: " << tree.leaf_count() << "\n";
  poskb::Rational mass = 0;
  for (const poskb::Branch& b : tree.branches())
    mass += b.p * poskb::Rational(poskb::pow2(
                      static_cast<unsigned>(data.vocab.size() - b.path.size())));
  info(opt) << "density sum: " << poskb::format_rational(mass)
            << (mass == 1 ? " (ok)" : " (NOT NORMALIZED)") << "\n";
  return mass == 1 ? kOk : kNegative;
}

int run_compile(const Options& opt, const std::string& tree_path) {
  poskb::DensityTree tree = poskb::load_tree_file(tree_path);
  poskb::StratifiedKB kb = poskb::tree_to_skb(tree);
  if (opt.out_path.empty()) throw poskb::Error("--out is required");
  write_file(opt.out_path, poskb::kb_to_string(kb));
  info(opt) << "entries: " << kb.size() << "\n";
  info(opt) << "levels: " << kb.stratify().levels() << "\n";
  return kOk;
}

int run_prune(const Options& opt, const std::string& mode) {
  poskb::StratifiedKB kb = require_kb(opt);
  poskb::StratifiedKB result = kb;
  if (mode == "exact") {
    result = kb.prune_exact();
  } else if (mode.rfind("merge:", 0) == 0) {
    result = kb.merge_top_levels(std::stoul(mode.substr(6)));
  } else {
    throw poskb::Error("unknown prune mode '" + mode + "' (use exact or merge:<levels>)");
  }
  if (opt.out_path.empty()) throw poskb::Error("--out is required");
  write_file(opt.out_path, poskb::kb_to_string(result));

  info(opt) << "entries: " << kb.size() << " -> " << result.size() << "\n";
  info(opt) << "levels: " << kb.stratify().levels() << " -> " << result.stratify().levels()
            << "\n";
  if (mode == "exact") {
    std::string note = "by construction";
    if (kb.vocab().size() <= 20)
      note = poskb::equal_possibility(kb, result) ? "verified" : "VIOLATED";
    info(opt) << "possibility preserved: " << note << "\n";
    if (note == "VIOLATED") return kNegative;
  }
  return kOk;
}

int run_query(const Options& opt, const std::string& kind, const std::string& evidence_text,
              const std::string& query_text) {
  poskb::StratifiedKB kb = require_kb(opt);
  const poskb::Vocabulary& vocab = kb.vocab();
  if (query_text.empty()) throw poskb::Error("--query is required");
  poskb::Formula query = poskb::parse_formula(query_text, vocab);

  if (kind == "marginal") {
    if (!evidence_text.empty())
      throw poskb::Error("marginal queries take no --evidence");
    poskb::Rational p = poskb::marginal(kb, query);
    info(opt) << poskb::render_marginal_report(p);
    return kOk;
  }

  poskb::Formula evidence =
      evidence_text.empty() ? poskb::Formula::make_true()
                            : poskb::parse_formula(evidence_text, vocab);
  if (kind == "map") {
    poskb::MapResult r = poskb::map_entails(kb, evidence, query);
    info(opt) << poskb::render_map_report(r);
    return r.entailed ? kOk : kNegative;
  }
  if (kind == "top") {
    auto r = poskb::top_theta_entails(kb, evidence, query);
    info(opt) << poskb::render_top_report(r);
    return r && r->entailed ? kOk : kNegative;
  }
  throw poskb::Error("unknown query kind '" + kind + "' (use map, top or marginal)");
}

int run_edit(const Options& opt, const std::string& action) {
  poskb::StratifiedKB kb = require_kb(opt);

  if (action == "implications") {
    auto listing = kb.to_implications();
    std::ostringstream out;
    out << "@atoms ";
    const auto& atoms = kb.vocab().atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) out << ", ";
      out << atoms[i];
    }
    out << "\n@spkb " << (kb.is_probabilistic() ? "true" : "false") << "\n";
    for (const auto& [f, w] : listing)
      out << poskb::format_rational(w) << " :: " << poskb::render_formula(f) << "\n";
    if (opt.out_path.empty())
      info(opt) << out.str();
    else
      write_file(opt.out_path, out.str());
    return kOk;
  }

  poskb::StratifiedKB result = kb;
  std::vector<std::string> warnings;
  if (action.rfind("remove:", 0) == 0) {
    auto r = kb.remove_entry(std::stoul(action.substr(7)));
    result = std::move(r.kb);
    warnings = std::move(r.warnings);
  } else if (action.rfind("swap:", 0) == 0) {
    std::string args = action.substr(5);
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw poskb::Error("swap needs two indices: swap:<i>,<j>");
    result = kb.swap_certainty(std::stoul(args.substr(0, comma)),
                               std::stoul(args.substr(comma + 1)));
  } else {
    throw poskb::Error("unknown edit action '" + action +
                       "' (use remove:<i>, swap:<i>,<j> or implications)");
  }
  if (opt.out_path.empty()) throw poskb::Error("--out is required");
  write_file(opt.out_path, poskb::kb_to_string(result));
  for (const std::string& w : warnings) info(opt) << "warning: " << w << "\n";
  info(opt) << "entries: " << kb.size() << " -> " << result.size() << "\n";
  return kOk;
}

int run_validate(const Options& opt) {
  poskb::StratifiedKB kb = require_kb(opt);
  poskb::Rational sum = kb.validate_spkb();
  bool ok = sum == 1;
  info(opt) << "possibility sum: " << poskb::format_rational(sum)
            << (ok ? " (ok: probabilistic)" : " (not a probability distribution)") << "\n";
  if (kb.is_probabilistic() && !ok)
    info(opt) << "warning: base is flagged @spkb true but does not sum to 1\n";
  return ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified possibilistic knowledge bases: learning, compression, queries"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--kb", opt.kb_path, "knowledge-base file");
  app.add_option("--out", opt.out_path, "output file");
  app.add_flag("--quiet", opt.quiet, "suppress informational output");

  std::string data_path, tree_path, mode = "exact", kind, evidence_text, query_text, action;
  int max_depth = -1;
  std::size_t min_leaf_rows = 1;

  CLI::App* learn = app.add_subcommand("learn", "learn a density tree from csv data");
  learn->add_option("--data", data_path, "csv with a header row of atom names")->required();
  learn->add_option("--max-depth", max_depth, "depth cap (default: number of atoms)");
  learn->add_option("--min-leaf-rows", min_leaf_rows, "only split nodes with at least this many rows");

  CLI::App* compile = app.add_subcommand("compile", "compile a tree into a knowledge base");
  compile->add_option("--tree", tree_path, "tree json file")->required();

  CLI::App* prune = app.add_subcommand("prune", "compress a knowledge base");
  prune->add_option("mode", mode, "exact | merge:<levels>");

  CLI::App* query = app.add_subcommand("query", "run a query against a knowledge base");
  query->add_option("kind", kind, "map | top | marginal")->required();
  query->add_option("--evidence", evidence_text, "evidence formula (map and top)");
  query->add_option("--query", query_text, "query formula")->required();

  CLI::App* edit = app.add_subcommand("edit", "edit or re-render a knowledge base");
  edit->add_option("action", action, "remove:<i> | swap:<i>,<j> | implications")->required();

  CLI::App* validate = app.add_subcommand("validate", "check that possibilities sum to 1");
  (void)validate;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (learn->parsed()) return run_learn(opt, data_path, max_depth, min_leaf_rows);
    if (compile->parsed()) return run_compile(opt, tree_path);
    if (prune->parsed()) return run_prune(opt, mode);
    if (query->parsed()) return run_query(opt, kind, evidence_text, query_text);
    if (edit->parsed()) return run_edit(opt, action);
    if (validate->parsed()) return run_validate(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
