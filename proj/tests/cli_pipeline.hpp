#pragma once

// Drives the stancesum executable through every subcommand on a small
// synthetic corpus. Shared by the CLI unit test and the acceptance binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace clipipeline {

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the CLI with the given arguments, stderr appended to log. Returns
// the process exit status (or -1 when the shell could not run it).
inline int run_cli(const std::vector<std::string>& args, const std::filesystem::path& log) {
  std::string cmd = quote(STANCESUM_CLI_PATH);
  for (const std::string& a : args) cmd += " " + quote(a);
  cmd += " >>" + quote(log.string()) + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct PipelineRun {
  bool ok = true;
  std::string failed_step;
  // Output file name -> contents, for byte comparison between runs.
  std::map<std::string, std::string> outputs;
};

// Every step of the pipeline, in order. Paths are relative to dir.
inline PipelineRun run_pipeline(const std::filesystem::path& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path log = dir / "log.txt";
  auto p = [&](const char* leaf) { return (dir / leaf).string(); };
  const std::string s = std::to_string(seed);
  const std::vector<std::vector<std::string>> steps = {
      {"--seed", s, "synth", "--output-dir", dir.string(), "--users-per-side", "40",
       "--tweets-per-user", "8", "--p-in", "0.2", "--p-out", "0.01", "--labeled-per-class", "40"},
      {"ingest", "--input", p("corpus.jsonl"), "--topic", "abortion", "--output", p("clean.jsonl")},
      {"partition", "--corpus", p("clean.jsonl"), "--output", p("assignment.tsv"), "--graph-output",
       p("graph.tsv")},
      {"hashtags", "--corpus", p("clean.jsonl"), "--assignment", p("assignment.tsv"), "--output",
       p("table.tsv")},
      {"--seed", s, "train-hashtag-model", "--corpus", p("clean.jsonl"), "--output",
       p("hashtag_model.txt"), "--dimension", "16384", "--epochs", "3"},
      {"--seed", s, "train-articulation", "--labeled", p("labeled.jsonl"), "--output",
       p("articulation_model.txt")},
      {"build-lm", "--corpus", p("clean.jsonl"), "--topic", "abortion", "--output", p("lm.tsv")},
      {"--threads", "3", "summarize", "--method", "sumsat", "--corpus", p("clean.jsonl"), "--topic",
       "abortion", "--table", p("table.tsv"), "--hashtag-model", p("hashtag_model.txt"),
       "--articulation-model", p("articulation_model.txt"), "--lm", p("lm.tsv"), "--output",
       p("sumsat.json")},
      {"--community-only", "summarize", "--method", "hashtag-sumsat", "--corpus", p("clean.jsonl"),
       "--topic", "abortion", "--table", p("table.tsv"), "--hashtag-model", p("hashtag_model.txt"),
       "--articulation-model", p("articulation_model.txt"), "--lm", p("lm.tsv"), "--assignment",
       p("assignment.tsv"), "--output", p("hashtag_sumsat.json")},
      {"--seed", s, "baseline", "--method", "random", "--corpus", p("clean.jsonl"), "--topic",
       "abortion", "--output", p("random.json")},
      {"baseline", "--method", "most-rt", "--corpus", p("clean.jsonl"), "--topic", "abortion",
       "--output", p("most_rt.json")},
      {"baseline", "--method", "sumbasic", "--corpus", p("clean.jsonl"), "--topic", "abortion",
       "--output", p("sumbasic.json")},
      {"diagnose", "--corpus", p("clean.jsonl"), "--topic", "abortion", "--truth",
       p("truth_assignment.tsv"), "--manifest", p("planted.json"), "--assignment", p("assignment.tsv"),
       "--table", p("table.tsv"), "--summary", p("sumsat.json"), "--output", p("diagnostics.json")},
      {"--seed", s, "eval-bundle", "--first", p("sumsat.json"), "--second", p("most_rt.json"),
       "--output", p("bundle.json"), "--mapping-output", p("mapping.json")},
  };
  PipelineRun run;
  for (const auto& step : steps) {
    if (run_cli(step, log) != 0) {
      run.ok = false;
      for (const auto& a : step) run.failed_step += a + " ";
      return run;
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name != "log.txt") run.outputs[name] = slurp(entry.path());
  }
  return run;
}

}  // namespace clipipeline
