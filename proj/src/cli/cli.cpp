// Copyright 2026 The Moodlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "moodlog/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "moodlog/cddr/cddr.hpp"
#include "moodlog/datalog/evaluator.hpp"
#include "moodlog/datalog/parser.hpp"
#include "moodlog/datalog/provenance.hpp"
#include "moodlog/llm/client.hpp"
#include "moodlog/llm/prompts.hpp"
#include "moodlog/patient/io.hpp"
#include "moodlog/service/http.hpp"
#include "moodlog/validator/lint.hpp"
#include "moodlog/validator/score.hpp"

namespace moodlog::cli {

namespace fs = std::filesystem;
namespace dl = datalog;

namespace {

// Missing or unreadable input; maps to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain failure already reported; maps to exit code 1.
struct Failed {};

std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path + ": cannot read");
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

std::string load_program(const std::string& spec, std::istream& in) {
  if (spec == "default") return std::string(cddr::bundled_program());
  return read_text(spec, in);
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err, const std::string& prefix = "") {
  for (const auto& d : diagnostics) err << prefix << to_string(d) << "\n";
}

// Lints and compiles; lint errors are reported and abort the command.
std::shared_ptr<const dl::StratifiedPlan> compile_checked(const std::string& source, std::ostream& err) {
  auto diagnostics = validator::lint(source);
  if (has_errors(diagnostics)) {
    print_diagnostics(diagnostics, err);
    throw Failed{};
  }
  return dl::compile(source);
}

patient::PatientDataset load_dataset(const std::string& path, std::istream& in) {
  if (path == "default") return cddr::bundled_dataset();
  std::string text = read_text(path, in);
  return patient::parse_patient_table(text, path);
}

// --patient takes a JSON record or a dataset table.
patient::PatientDataset load_patient(const std::string& path, std::istream& in) {
  std::string text = read_text(path, in);
  if (fs::path(path).extension() == ".json") {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw patient::DataError(path + ": not valid JSON");
    return {{patient::record_from_json(doc)}, {}};
  }
  return patient::parse_patient_table(text, path);
}

std::string joined(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string indent(const std::string& text, const std::string& pad) {
  std::string out;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) out += pad + line + "\n";
  return out;
}

void require_directory(const std::string& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw IoError(path + ": not a directory");
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& program_path, std::istream& in, std::ostream& err) {
  std::string source = load_program(program_path, in);
  auto diagnostics = validator::lint(source);
  print_diagnostics(diagnostics, err);
  err << count(diagnostics, Severity::error) << " error(s), " << count(diagnostics, Severity::warning)
      << " warning(s)\n";
  return has_errors(diagnostics) ? kFailure : kSuccess;
}

int cmd_run(const std::string& program_path, const std::string& facts, const std::string& out_dir, std::istream& in,
            std::ostream& out, std::ostream& err) {
  std::string source = load_program(program_path, in);
  require_directory(facts);
  auto plan = compile_checked(source, err);
  dl::FactStore input = patient::load_facts_dir(facts, plan->program());
  dl::FactStore result = dl::evaluate(*plan, input);
  std::vector<std::string> outputs;
  for (const auto& o : plan->program().outputs) outputs.push_back(o.name);
  try {
    patient::write_relations(result, outputs, out_dir, ".csv");
  } catch (const patient::DataError& e) {
    throw IoError(e.what());
  }
  for (const auto& name : outputs) out << name << "\t" << query(result, name).size() << "\n";
  return kSuccess;
}

int cmd_diagnose(const std::string& patient_path, const std::string& dataset_path, const std::string& id,
                 const std::string& program_path, bool explain, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  patient::PatientDataset dataset =
      patient_path.empty() ? load_dataset(dataset_path, in) : load_patient(patient_path, in);
  if (!id.empty()) {
    const patient::PatientRecord* record = dataset.find(id);
    if (!record) throw IoError("no patient '" + id + "' in the input");
    dataset = {{*record}, {}};
  }
  cddr::Diagnoser diagnoser(compile_checked(load_program(program_path, in), err));

  bool failed = false;
  for (const auto& record : dataset.records) {
    dl::ProvenanceResult provenance;
    auto result = diagnoser.diagnose(record, explain ? &provenance : nullptr);
    print_diagnostics(result.diagnostics, err, record.id + ": ");
    if (!result.evaluated) {
      failed = true;
      continue;
    }
    out << record.id << " → " << (result.disorders.empty() ? "-" : joined(result.disorders, ","))
        << " [episodes: " << patient::to_string(result.episodes) << "]\n";
    if (!explain) continue;
    for (const auto& disorder : result.disorders) {
      dl::GroundAtom fact{"Diagnosis", {dl::Value::symbol(record.id), dl::Value::symbol(disorder)}};
      out << indent(dl::render_tree(*dl::explain(fact, provenance.index), dl::TreeFormat::text), "  ");
    }
  }
  return failed ? kFailure : kSuccess;
}

int cmd_explain(const std::string& program_path, const std::string& facts, const std::string& dataset_path,
                const std::string& fact_text, const std::string& format, std::istream& in, std::ostream& out,
                std::ostream& err) {
  std::string source = load_program(program_path, in);
  if (facts.empty() == dataset_path.empty()) throw IoError("explain needs exactly one of --facts or --dataset");
  if (!facts.empty()) require_directory(facts);
  auto plan = compile_checked(source, err);
  dl::FactStore input = facts.empty() ? patient::to_fact_store(load_dataset(dataset_path, in))
                                      : patient::load_facts_dir(facts, plan->program());
  std::string error;
  auto atom = dl::parse_ground_atom(fact_text, &error);
  if (!atom) throw IoError("cannot parse fact '" + fact_text + "': " + error);
  auto result = dl::evaluate_with_provenance(*plan, input);
  try {
    auto tree = dl::explain(dl::ground(*atom), result.index);
    out << dl::render_tree(*tree, format == "json" ? dl::TreeFormat::structured : dl::TreeFormat::text);
    if (format == "json") out << "\n";
  } catch (const dl::NotDerived& e) {
    err << e.what() << "\n";
    return kFailure;
  }
  return kSuccess;
}

int cmd_bench(const std::string& dataset_path, const std::string& program_path, bool episodes, std::istream& in,
              std::ostream& out, std::ostream& err) {
  patient::PatientDataset dataset = load_dataset(dataset_path, in);
  std::string source = load_program(program_path, in);
  validator::ScoreReport report;
  try {
    if (episodes) {
      report = cddr::benchmark_episodes(dataset, cddr::Diagnoser(compile_checked(source, err)));
    } else {
      report = validator::score_candidate(source, dataset);
    }
  } catch (const validator::CandidateRefused& e) {
    print_diagnostics(e.diagnostics(), err);
    return kFailure;
  }
  print_diagnostics(report.diagnostics, err);
  out << report.to_tsv();
  for (const auto& [outcome, n] : report.breakdown()) err << outcome << "\t" << n << "\n";
  return report.perfect() ? kSuccess : kFailure;
}

struct TranslateArgs {
  std::string criteria;
  std::string client = "replay";
  std::string transcript;
  std::string record;
  std::string example_program;
  std::string example_criteria;
  std::string model;
  std::vector<std::string> params;
};

int cmd_translate(const TranslateArgs& args, std::istream& in, std::ostream& out) {
  std::string criteria = read_text(args.criteria, in);
  llm::TranslationExample example = llm::default_example();
  if (!args.example_program.empty()) example.program = read_text(args.example_program, in);
  if (!args.example_criteria.empty()) example.criteria = read_text(args.example_criteria, in);
  llm::PromptBundle bundle = llm::render_translation_prompt(criteria, example);

  std::unique_ptr<llm::ModelClient> client;
  if (args.client == "replay") {
    if (args.transcript.empty()) throw IoError("--client replay needs --transcript");
    std::error_code ec;
    if (!fs::is_regular_file(args.transcript, ec)) throw IoError(args.transcript + ": no such transcript");
    client = std::make_unique<llm::ReplayClient>(llm::ReplayClient::from_file(args.transcript));
  } else {
    llm::LiveOptions options;
    try {
      options = llm::LiveOptions::from_environment();
    } catch (const llm::TransportError& e) {
      throw IoError(e.what());
    }
    options.model = args.model;
    for (const auto& p : args.params) {
      auto eq = p.find('=');
      if (eq == std::string::npos) throw IoError("--param expects key=value, got '" + p + "'");
      auto value = nlohmann::json::parse(p.substr(eq + 1), nullptr, false);
      options.parameters[p.substr(0, eq)] = value.is_discarded() ? nlohmann::json(p.substr(eq + 1)) : value;
    }
    client = std::make_unique<llm::LiveClient>(std::move(options));
  }
  std::unique_ptr<llm::RecordingClient> recorder;
  llm::ModelClient* used = client.get();
  if (!args.record.empty()) {
    recorder = std::make_unique<llm::RecordingClient>(*client, args.record);
    used = recorder.get();
  }
  std::string program = llm::request_translation(bundle, *used);
  out << program;
  if (!program.empty() && program.back() != '\n') out << "\n";
  return kSuccess;
}

int cmd_serve(const std::string& program_path, const std::string& dataset_path, const std::string& bind, int port,
              const std::string& cors, std::istream& in, std::ostream& err) {
  service::ServiceOptions options;
  options.program_source = load_program(program_path, in);
  if (!dataset_path.empty()) options.preload = load_dataset(dataset_path, in);
  std::unique_ptr<service::DiagnosisService> svc;
  try {
    svc = std::make_unique<service::DiagnosisService>(std::move(options));
  } catch (const service::StartupError& e) {
    print_diagnostics(e.diagnostics(), err);
    err << "refusing to start: " << e.what() << "\n";
    return kFailure;
  }
  httplib::Server server;
  service::install_routes(server, *svc, cors);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(bind);
  } else if (!server.bind_to_port(bind, port)) {
    bound = -1;
  }
  if (bound <= 0) throw IoError("cannot bind " + bind + ":" + std::to_string(port));
  err << "listening on http://" << bind << ":" << bound << std::endl;
  return server.listen_after_bind() ? kSuccess : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mood-disorder decision support on a Datalog engine", "moodlog"};
  app.require_subcommand(1);

  std::string program = "default";

  auto* check = app.add_subcommand("check", "Lint a program; exit 1 on errors");
  std::string check_path;
  check->add_option("program", check_path, "Program file, '-' for stdin, or 'default'")->required();

  auto* run_cmd = app.add_subcommand("run", "Evaluate a program over a facts directory");
  std::string run_program, facts, out_dir;
  run_cmd->add_option("program", run_program, "Program file or 'default'")->required();
  run_cmd->add_option("--facts", facts, "Directory of <Relation>.facts files")->required();
  run_cmd->add_option("--out", out_dir, "Directory for <Relation>.csv outputs")->required();

  auto* diagnose = app.add_subcommand("diagnose", "Diagnose patients");
  std::string patient_path, dataset_path, patient_id;
  bool explain_flag = false;
  auto* patient_opt = diagnose->add_option("--patient", patient_path, "Patient record (.json) or table");
  auto* dataset_opt = diagnose->add_option("--dataset", dataset_path, "Patient table");
  patient_opt->excludes(dataset_opt);
  diagnose->add_option("--id", patient_id, "Only this patient");
  diagnose->add_option("--program", program, "Program file or 'default'");
  diagnose->add_flag("--explain", explain_flag, "Print derivation trees");

  auto* explain = app.add_subcommand("explain", "Explain one derived fact");
  std::string explain_program = "default", explain_facts, explain_dataset, fact_text, format = "text";
  explain->add_option("program", explain_program, "Program file or 'default'");
  explain->add_option("--facts", explain_facts, "Directory of <Relation>.facts files");
  explain->add_option("--dataset", explain_dataset, "Patient table");
  explain->add_option("--fact", fact_text, "Ground atom, e.g. Path(1, 3)")->required();
  explain->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* bench = app.add_subcommand("bench", "Score a program against a labelled dataset");
  std::string bench_dataset;
  bool episodes = false;
  bench->add_option("--dataset", bench_dataset, "Patient table with expected labels, or 'default'")->required();
  bench->add_option("--program", program, "Program file or 'default'");
  bench->add_flag("--episodes", episodes, "Compare current episodes instead of disorders");

  auto* translate = app.add_subcommand("translate", "Ask a model to translate criteria into a program");
  TranslateArgs targs;
  translate->add_option("--criteria", targs.criteria, "Criteria text file")->required();
  translate->add_option("--client", targs.client, "live or replay")->check(CLI::IsMember({"live", "replay"}));
  translate->add_option("--transcript", targs.transcript, "Transcript to replay");
  translate->add_option("--record", targs.record, "Append exchanges to this transcript");
  translate->add_option("--example", targs.example_program, "Example program for the one-shot prompt");
  translate->add_option("--example-criteria", targs.example_criteria, "Criteria of the example program");
  translate->add_option("--model", targs.model, "Model name sent to the live endpoint");
  translate->add_option("--param", targs.params, "Extra request field key=value (live client)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string bind = "127.0.0.1", cors, serve_dataset;
  int port = 8080;
  serve->add_option("--program", program, "Program file or 'default'");
  serve->add_option("--bind", bind, "Address to bind");
  serve->add_option("--port", port, "Port; 0 picks a free one");
  serve->add_option("--cors", cors, "Allowed browser origin");
  serve->add_option("--dataset", serve_dataset, "Patient table to preload for fact explanations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*check) return cmd_check(check_path, in, err);
    if (*run_cmd) return cmd_run(run_program, facts, out_dir, in, out, err);
    if (*diagnose) {
      if (patient_path.empty() && dataset_path.empty()) throw IoError("diagnose needs --patient or --dataset");
      return cmd_diagnose(patient_path, dataset_path, patient_id, program, explain_flag, in, out, err);
    }
    if (*explain) {
      return cmd_explain(explain_program, explain_facts, explain_dataset, fact_text, format, in, out, err);
    }
    if (*bench) return cmd_bench(bench_dataset, program, episodes, in, out, err);
    if (*translate) return cmd_translate(targs, in, out);
    if (*serve) return cmd_serve(program, serve_dataset, bind, port, cors, in, err);
  } catch (const IoError& e) {
    err << "moodlog: " << e.what() << "\n";
    return kUsage;
  } catch (const Failed&) {
    return kFailure;
  } catch (const std::exception& e) {
    err << "moodlog: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace moodlog::cli
