#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synchro/bench.hpp"
#include "synchro/cluster.hpp"
#include "synchro/dfa.hpp"
#include "synchro/encoding.hpp"
#include "synchro/fast_check.hpp"
#include "synchro/io.hpp"
#include "synchro/random_gen.hpp"
#include "synchro/reset.hpp"
#include "synchro/set_cover.hpp"

namespace synchro {

// Exit codes: 0 success, 1 domain answer "no", 2 input error, 3 capacity.
namespace cli_exit {
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kInput = 2;
constexpr int kCapacity = 3;
}  // namespace cli_exit

namespace detail {

inline std::string slurp(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") {
    std::ostringstream buf;
    buf << stdin_stream.rdbuf();
    return buf.str();
  }
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

inline void spill(const std::string& path, const std::string& text,
                  std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  f << text;
}

}  // namespace detail

/// Entry point shared by the synchro binary and the in-process CLI tests.
inline int cli_main(const std::vector<std::string>& args, std::istream& in,
                    std::ostream& out, std::ostream& err) {
  CLI::App app{"synchro: synchronizing-automata toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string format = "text";
  double budget_ext = 4.0;
  double budget_fin = 8.0;
  app.add_option("--seed", seed, "seed for all sampling (default 1)");
  app.add_option("--format", format, "output format: text|csv (clusters)")
      ->check(CLI::IsMember({"text", "csv"}));
  app.add_option("--budget-ext", budget_ext, "pair-extension budget constant");
  app.add_option("--budget-fin", budget_fin, "final-check budget constant");

  // check
  auto* check = app.add_subcommand("check", "decide synchronizability");
  std::string check_file = "-";
  bool check_fast = false, check_quad = false, check_paranoid = false;
  check->add_option("file", check_file, "DFA file, or - for stdin");
  check->add_flag("--fast", check_fast, "expected-linear checker (default)");
  check->add_flag("--quadratic", check_quad, "pair-BFS checker");
  check->add_flag("--paranoid", check_paranoid,
                  "fast checker, every non-fallback answer cross-checked");

  // rt
  auto* rt = app.add_subcommand("rt", "reset threshold");
  std::string rt_file = "-";
  bool rt_exact = false, rt_greedy = false;
  rt->add_option("file", rt_file, "DFA file, or - for stdin");
  rt->add_flag("--exact", rt_exact, "subset BFS, exact (n <= 64)");
  rt->add_flag("--greedy", rt_greedy, "greedy merging upper bound");

  // clusters
  auto* clusters = app.add_subcommand("clusters", "per-letter cluster summaries");
  std::string clusters_file = "-";
  clusters->add_option("file", clusters_file, "DFA file, or - for stdin");

  // reduce-sc
  auto* reduce = app.add_subcommand("reduce-sc", "Set-Cover to DFA reduction");
  std::string reduce_in = "-", reduce_out = "-";
  reduce->add_option("file", reduce_in, "Set-Cover file, or - for stdin");
  reduce->add_option("-o,--output", reduce_out, "output DFA file");

  // encode
  auto* encode = app.add_subcommand("encode", "binary-alphabet encoding");
  std::string encode_in = "-", encode_out = "-", encode_codec;
  encode->add_option("file", encode_in, "DFA file, or - for stdin");
  encode->add_option("-o,--output", encode_out, "output DFA file");
  encode->add_option("--codec", encode_codec, "codec map output file");

  // decode-word
  auto* decode = app.add_subcommand("decode-word", "decode a binary word");
  std::string decode_codec, decode_dfa, decode_word_file = "-";
  decode->add_option("--codec", decode_codec, "codec file from encode")->required();
  decode->add_option("--dfa", decode_dfa, "the original (pre-encoding) DFA")
      ->required();
  decode->add_option("file", decode_word_file, "word file, or - for stdin");

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  std::vector<int> gen_random;
  int gen_cerny_n = 0;
  std::vector<double> gen_sc;
  std::string gen_out = "-";
  gen->add_option("--random", gen_random, "uniform random DFA: n k")
      ->expected(2);
  gen->add_option("--cerny", gen_cerny_n, "Cerny automaton with n states");
  gen->add_option("--setcover", gen_sc, "random Set-Cover: n m density")
      ->expected(3);
  gen->add_option("-o,--output", gen_out, "output file");

  // prob
  auto* prob = app.add_subcommand("prob", "estimate synchronization probability");
  int prob_n = 0, prob_k = 2, prob_trials = 1000;
  prob->add_option("n", prob_n, "state count")->required();
  prob->add_option("k", prob_k, "alphabet size");
  prob->add_option("trials", prob_trials, "sample count");

  // bench
  auto* bench = app.add_subcommand("bench", "time fast vs quadratic checkers");
  std::vector<int> bench_sizes;
  int bench_k = 2, bench_trials = 5;
  bench->add_option("--sizes", bench_sizes, "state counts to time")
      ->required()
      ->delimiter(',');
  bench->add_option("--k", bench_k, "alphabet size");
  bench->add_option("--trials", bench_trials, "timed instances per size");

  std::vector<const char*> argv;
  argv.push_back("synchro");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return cli_exit::kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return cli_exit::kInput;
  }

  FastCheckConfig cfg;
  cfg.c_ext = budget_ext;
  cfg.c_fin = budget_fin;

  try {
    if (*check) {
      if (check_fast + check_quad + check_paranoid > 1)
        throw ValidationError("pick one of --fast, --quadratic, --paranoid");
      Dfa d = parse_dfa(detail::slurp(check_file, in));
      if (check_quad) {
        bool yes = is_synchronizing_quadratic(d);
        out << (yes ? "yes" : "no") << " path=quadratic\n";
        return yes ? cli_exit::kOk : cli_exit::kNo;
      }
      cfg.paranoid = check_paranoid;
      FastCheckOutcome r = is_synchronizing_fast(d, cfg);
      out << (r.answer ? "yes" : "no") << " path=" << to_string(r.path)
          << " stage=" << to_string(r.stage_reached) << '\n';
      if (r.witness)
        out << "witness=" << r.witness->first << ' ' << r.witness->second << '\n';
      if (r.paranoid_mismatch) {
        out << "paranoid-mismatch\n";
        err << "warning: fast path disagreed with the quadratic oracle\n";
      }
      return r.answer ? cli_exit::kOk : cli_exit::kNo;
    }

    if (*rt) {
      if (rt_exact == rt_greedy)
        throw ValidationError("pick exactly one of --exact, --greedy");
      Dfa d = parse_dfa(detail::slurp(rt_file, in));
      std::optional<ResetResult> r = rt_exact ? shortest_reset(d) : greedy_reset(d);
      if (!r) {
        out << "not-synchronizing\n";
        return cli_exit::kNo;
      }
      out << "length=" << r->length << '\n' << serialize_word(r->word);
      return cli_exit::kOk;
    }

    if (*clusters) {
      Dfa d = parse_dfa(detail::slurp(clusters_file, in));
      if (format == "csv") out << "letter,cluster,size,cycle,height\n";
      for (int x = 1; x <= d.k(); ++x) {
        ClusterStructure cs = cluster_structure(d, x);
        for (int id : cs.cluster_ids) {
          int height = 0;
          for (int root : cs.cycle_states)
            if (cs.cluster_of[root] == id)
              height = std::max(height, cs.tree_height_by_root[root]);
          if (format == "csv")
            out << x << ',' << id << ',' << cs.cluster_size_by_id[id] << ','
                << cs.cycle_len_by_id[id] << ',' << height << '\n';
          else
            out << "letter=" << x << " cluster=" << id
                << " size=" << cs.cluster_size_by_id[id]
                << " cycle=" << cs.cycle_len_by_id[id] << " height=" << height
                << '\n';
        }
      }
      return cli_exit::kOk;
    }

    if (*reduce) {
      SetCoverInstance inst = parse_setcover(detail::slurp(reduce_in, in));
      detail::spill(reduce_out, serialize_dfa(reduce_to_automaton(inst)), out);
      return cli_exit::kOk;
    }

    if (*encode) {
      Dfa a = parse_dfa(detail::slurp(encode_in, in));
      auto [b, codec] = encode_binary(a);
      detail::spill(encode_out, serialize_dfa(b), out);
      if (!encode_codec.empty())
        detail::spill(encode_codec, serialize_codec(codec), out);
      return cli_exit::kOk;
    }

    if (*decode) {
      Dfa a = parse_dfa(detail::slurp(decode_dfa, in));
      std::istringstream codec_in(detail::slurp(decode_codec, in));
      BinaryCodec codec = parse_codec(codec_in, a);
      std::string text = detail::slurp(decode_word_file, in);
      std::istringstream word_in(text);
      std::string line;
      std::getline(word_in, line);
      Word bw = parse_word(line);
      std::optional<Word> u = decode_word(codec, bw);
      if (!u) {
        out << "not-a-reset-word\n";
        return cli_exit::kNo;
      }
      out << serialize_word(*u);
      return cli_exit::kOk;
    }

    if (*gen) {
      int picked = (!gen_random.empty()) + (gen_cerny_n > 0) + (!gen_sc.empty());
      if (picked != 1)
        throw ValidationError("pick exactly one of --random, --cerny, --setcover");
      std::string text;
      if (!gen_random.empty())
        text = serialize_dfa(sample_dfa(gen_random[0], gen_random[1], seed));
      else if (gen_cerny_n > 0)
        text = serialize_dfa(gen_cerny(gen_cerny_n));
      else
        text = serialize_setcover(sample_setcover(static_cast<int>(gen_sc[0]),
                                                  static_cast<int>(gen_sc[1]),
                                                  gen_sc[2], seed));
      detail::spill(gen_out, text, out);
      return cli_exit::kOk;
    }

    if (*prob) {
      double f = estimate_sync_probability(prob_n, prob_k, prob_trials, seed);
      out << std::fixed << std::setprecision(6) << f << '\n';
      return cli_exit::kOk;
    }

    if (*bench) {
      auto records = bench_checkers(bench_sizes, bench_k, bench_trials, seed, cfg);
      out << bench_csv(records);
      return cli_exit::kOk;
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return cli_exit::kCapacity;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return cli_exit::kInput;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << '\n';
    return cli_exit::kInput;
  }
  return cli_exit::kInput;
}

}  // namespace synchro
