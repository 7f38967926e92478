#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace cli {

/// A parsed subcommand and the action it runs; the action returns the exit code.
struct Command {
  CLI::App* app = nullptr;
  std::function<int()> run;
};

/// Registers every subcommand on `app`. Option storage lives in the returned
/// state object, which must outlive parsing and execution.
struct CommandState;
std::shared_ptr<CommandState> register_commands(CLI::App& app, std::vector<Command>& out);

}  // namespace cli
