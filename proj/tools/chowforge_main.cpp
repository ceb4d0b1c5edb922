#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "chowforge/error.hpp"
#include "chowforge/io.hpp"
#include "chowforge/version.hpp"

namespace {

namespace io = chowforge::io;
using chowforge::Error;
using chowforge::ErrorCode;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Capacity:
      return 3;
    case ErrorCode::Internal:
      return 1;
    default:
      return 2;
  }
}

struct CommonArgs {
  std::string matroid_path;
  std::string divisor;
  std::string sets;
  std::string params;
  std::string out_path;
  std::string format = "json";
  long limit = -1;
  long seed = -1;
  long count = -1;
  long trials = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--matroid", args.matroid_path,
                  "Matroid description file (JSON)")
      ->required();
  cmd->add_option("--divisor", args.divisor, "Divisor expression");
  cmd->add_option("--sets", args.sets,
                  "JSON array of element arrays (dhr command)");
  cmd->add_option("--params", args.params,
                  "Extra command parameters as a JSON object");
  cmd->add_option("--out", args.out_path, "Write the report to a file");
  cmd->add_option("--format", args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--limit", args.limit, "Cap on the number of proper flats");
  cmd->add_option("--seed", args.seed, "Seed for scan sampling");
  cmd->add_option("--count", args.count, "Sample count for scans");
  cmd->add_option("--trials", args.trials, "Trial count for identities");
}

io::Json load_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Parse,
                std::string("cannot open ") + what + " file: " + path);
  }
  try {
    return io::Json::parse(in);
  } catch (const io::Json::parse_error& e) {
    throw Error(ErrorCode::Parse,
                std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

io::Json build_params(const CommonArgs& args) {
  io::Json params = io::Json::object();
  if (!args.params.empty()) {
    try {
      params = io::Json::parse(args.params);
    } catch (const io::Json::parse_error& e) {
      throw Error(ErrorCode::Parse,
                  std::string("invalid --params JSON: ") + e.what());
    }
    if (!params.is_object()) {
      throw Error(ErrorCode::Parse, "--params must be a JSON object");
    }
  }
  if (!args.divisor.empty()) params["divisor"] = args.divisor;
  if (!args.sets.empty()) {
    try {
      params["sets"] = io::Json::parse(args.sets);
    } catch (const io::Json::parse_error& e) {
      throw Error(ErrorCode::Parse,
                  std::string("invalid --sets JSON: ") + e.what());
    }
  }
  if (args.limit >= 0) params["limit"] = args.limit;
  if (args.seed >= 0) params["seed"] = args.seed;
  if (args.count >= 0) params["count"] = args.count;
  if (args.trials >= 0) params["trials"] = args.trials;
  return params;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw Error(ErrorCode::Parse, "cannot write output file: " + out_path);
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chow rings, tangent data, and divisor positivity for "
               "loopless matroids"};
  app.set_version_flag("--version", CHOWFORGE_VERSION);
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"describe", "Ground set, rank, and the proper flats"},
      {"chow", "Graded dimensions of the Chow ring"},
      {"tangent", "Total Chern class of the tangent K-class"},
      {"todd", "Todd class of the tangent K-class"},
      {"chi", "Euler characteristic of a divisor, both pipelines"},
      {"chow-poly", "Chow polynomial coefficients"},
      {"nef-check", "Positivity hierarchy membership with certificates"},
      {"dhr", "Dragon Hall-Rado condition for a list of subsets"},
      {"kv-scan", "Sign scan of the Euler characteristic on nef samples"},
      {"identities", "Run the full invariant suite on the matroid"},
  };
  std::vector<std::pair<CLI::App*, CommonArgs>> subs;
  subs.reserve(std::size(commands));
  for (auto& [name, help] : commands) {
    auto& entry = subs.emplace_back(app.add_subcommand(name, help), CommonArgs{});
    add_common(entry.first, entry.second);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [cmd, args] : subs) {
    if (!cmd->parsed()) continue;
    try {
      io::JobSpec job;
      job.matroid = load_json(args.matroid_path, "matroid");
      job.command = cmd->get_name();
      job.params = build_params(args);
      io::Report report = io::run(job);
      emit(args.format == "csv" ? report.to_csv() : report.to_string(),
           args.out_path);
      if (job.command == "identities" &&
          !report.results.value("all_pass", false)) {
        return 4;
      }
      return 0;
    } catch (const Error& e) {
      io::Json err{{"error", {{"code", e.code_name()}, {"message", e.what()}}}};
      std::cout << err.dump(2) << "\n";
      std::cerr << e.code_name() << ": " << e.what() << "\n";
      return exit_code_for(e.code());
    } catch (const std::exception& e) {
      io::Json err{{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}};
      std::cout << err.dump(2) << "\n";
      std::cerr << "INTERNAL: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
