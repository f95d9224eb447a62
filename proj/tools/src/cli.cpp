#include "fgim/cli/cli.hpp"

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace fgim::cli {

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

io::RunConfig load_config(const std::string& path) {
  return path.empty() ? io::RunConfig{} : io::parse_config(path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribute transfer by gradient edits of autoencoder latents", "fgim"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "run configuration file (defaults apply when absent)");

  auto* train_ae_cmd = app.add_subcommand("train-ae", "train the autoencoder; writes vocab.txt and ae.ckpt");
  auto* train_clf_cmd =
      app.add_subcommand("train-clf", "train the latent and evaluation classifiers; writes clf.ckpt and eval_clf.ckpt");

  TransferArgs transfer_args;
  auto* transfer_cmd = app.add_subcommand("transfer", "edit sentences toward a target attribute vector");
  transfer_cmd->add_option("-t,--target", transfer_args.target, "target, e.g. 1.0 or 1,0")->required();
  transfer_cmd->add_option("-i,--input", transfer_args.input, "sentences, one per line (default stdin)");
  transfer_cmd->add_option("-o,--output", transfer_args.output, "transferred sentences (default stdout)");
  transfer_cmd->add_option("--trace", transfer_args.trace, "JSON-lines trace (default <output_dir>/trace.jsonl)");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "run each weight on its own over the test split; writes a CSV");
  sweep_cmd->add_option("-t,--target", sweep_args.target, "fixed target (default: flip each label)");
  sweep_cmd->add_option("-n,--limit", sweep_args.limit, "use the first n test sentences");
  sweep_cmd->add_option("-o,--output", sweep_args.output, "CSV path (default <output_dir>/sweep.csv)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "accuracy, BLEU and perplexity of transferred sentences");
  eval_cmd->add_option("-i,--input", eval_args.input, "transferred sentences")->required();
  eval_cmd->add_option("-r,--references", eval_args.references, "reference sentences, aligned")->required();
  eval_cmd->add_option("-t,--target", eval_args.target, "target attribute vector")->required();
  eval_cmd->add_option("-o,--output", eval_args.output, "CSV path (default stdout)");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export-latents", "2-D projection CSV and raw latent vectors");
  export_cmd->add_option("-s,--split", export_args.split, "train, dev or test")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  export_cmd->add_option("-n,--limit", export_args.limit, "use the first n sentences");
  export_cmd->add_flag("--edit", export_args.edit, "add edited latents for every weight");
  export_cmd->add_option("-o,--output-prefix", export_args.output_prefix,
                         "writes <prefix>.csv and <prefix>_raw.txt (default <output_dir>/latents)");

  MakeToyArgs toy_args;
  auto* toy_cmd = app.add_subcommand("make-toy", "write the synthetic sentiment corpus and a matching config");
  toy_cmd->add_option("-o,--output", toy_args.output, "directory to create")->required();
  toy_cmd->add_option("-a,--aspects", toy_args.aspects, "1 or 2 sentiment slots")->check(CLI::Range(1, 2));
  toy_cmd->add_option("--train-size", toy_args.train_size, "training sentences (default from the preset)");
  toy_cmd->add_option("--seed", toy_args.seed, "corpus seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return code(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << "fgim: " << e.what() << "\n";
    if (app.get_subcommands().empty()) err << app.help();
    return code(ExitCode::usage);
  }

  const Streams io{in, out, err};
  try {
    if (toy_cmd->parsed()) {
      make_toy(toy_args, io);
      return code(ExitCode::ok);
    }
    const auto config = load_config(config_path);
    if (train_ae_cmd->parsed()) train_ae(config, io);
    else if (train_clf_cmd->parsed()) train_clf(config, io);
    else if (transfer_cmd->parsed()) transfer(config, transfer_args, io);
    else if (sweep_cmd->parsed()) sweep(config, sweep_args, io);
    else if (eval_cmd->parsed()) evaluate(config, eval_args, io);
    else if (export_cmd->parsed()) export_latents(config, export_args, io);
    return code(ExitCode::ok);
  } catch (const ConfigError& e) {
    err << "fgim: config: " << e.what() << "\n";
    return code(ExitCode::config);
  } catch (const IngestionError& e) {
    err << "fgim: input: " << e.what() << "\n";
    return code(ExitCode::ingestion);
  } catch (const MissingCheckpointError& e) {
    err << "fgim: " << e.what() << "\n";
    return code(ExitCode::missing_checkpoint);
  } catch (const CheckpointError& e) {
    err << "fgim: checkpoint: " << e.what() << "\n";
    return code(ExitCode::checkpoint_format);
  } catch (const IncompatibleModelError& e) {
    err << "fgim: incompatible models: " << e.what() << "\n";
    return code(ExitCode::incompatible_models);
  } catch (const MalformedTargetError& e) {
    err << "fgim: target: " << e.what() << "\n";
    return code(ExitCode::malformed_target);
  } catch (const TrainingError& e) {
    err << "fgim: training: " << e.what() << "\n";
    return code(ExitCode::training_diverged);
  } catch (const std::exception& e) {
    err << "fgim: " << e.what() << "\n";
    return code(ExitCode::failure);
  }
}

}  // namespace fgim::cli
