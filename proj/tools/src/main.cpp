#include <iostream>

#include <CLI11.hpp>

#include "cli_util.hpp"
#include "commands.hpp"
#include "lagcalc/error.hpp"
#include "lagcalc/parallel.hpp"

namespace {

std::string error_kind(const lagcalc::Error& e) {
  if (dynamic_cast<const lagcalc::DegenerateTau*>(&e)) return "DegenerateTau";
  if (dynamic_cast<const lagcalc::AmbiguousMatching*>(&e)) return "AmbiguousMatching";
  if (dynamic_cast<const lagcalc::DimensionError*>(&e)) return "DimensionError";
  if (dynamic_cast<const lagcalc::GridError*>(&e)) return "GridError";
  if (dynamic_cast<const lagcalc::ConvergenceError*>(&e)) return "ConvergenceError";
  if (dynamic_cast<const lagcalc::FormatError*>(&e)) return "FormatError";
  if (dynamic_cast<const lagcalc::DomainError*>(&e)) return "DomainError";
  return "Error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lagcalc: harmonic analysis on step-two nilpotent groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lagcalc 0.1.0");
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (default: LAGCALC_THREADS, else hardware concurrency)")
      ->check(CLI::PositiveNumber);

  std::vector<cli::Command> commands;
  const auto state = cli::register_commands(app, commands);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (threads > 0) lagcalc::set_thread_count(threads);

  for (const cli::Command& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      return c.run();
    } catch (const cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return 2;
    } catch (const lagcalc::Error& e) {
      cli::json j;
      j["error"] = error_kind(e);
      j["precondition"] = e.precondition();
      j["message"] = e.what();
      std::cerr << j.dump() << '\n';
      return 1;
    } catch (const std::exception& e) {
      cli::json j;
      j["error"] = "InternalError";
      j["message"] = e.what();
      std::cerr << j.dump() << '\n';
      return 1;
    }
  }
  std::cerr << "usage error: no command selected\n";
  return 2;
}
