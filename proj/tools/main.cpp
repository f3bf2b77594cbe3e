#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "latticegan/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"latticegan - spatially distributed coevolutionary GAN training"};
  app.require_subcommand(1);

  latticegan::TrainOptions train_options;
  std::string mode_word;
  auto* train = app.add_subcommand("train", "run an experiment and write its outputs");
  train->add_option("--config", train_options.config_path,
                    "experiment config file (defaults apply when omitted)");
  train->add_option("--out", train_options.out_dir, "output directory")->required();
  std::uint64_t seed_value = 0;
  auto* seed_opt = train->add_option("--seed", seed_value, "override run.seed");
  train->add_option("--mode", mode_word, "override run.mode (seq|async)")
      ->check(CLI::IsMember({"seq", "async"}));

  std::vector<std::string> compare_dirs;
  auto* compare = app.add_subcommand("compare", "tabulate completed runs against each other");
  compare->add_option("dirs", compare_dirs, "run directories (or directories of runs)")
      ->required()
      ->expected(-2);

  std::string checkpoint_path;
  auto* inspect = app.add_subcommand("inspect-checkpoint", "describe a checkpoint file");
  inspect->add_option("file", checkpoint_path, "checkpoint file")->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    if (seed_opt->count() > 0) train_options.seed = seed_value;
    if (!mode_word.empty()) {
      train_options.mode = mode_word == "seq"
                               ? latticegan::ExecutionMode::SequentialDeterministic
                               : latticegan::ExecutionMode::ParallelAsync;
    }
    return latticegan::cmd_train(train_options, std::cout, std::cerr);
  }
  if (compare->parsed()) {
    return latticegan::cmd_compare(compare_dirs, std::cout, std::cerr);
  }
  return latticegan::cmd_inspect_checkpoint(checkpoint_path, std::cout, std::cerr);
}
