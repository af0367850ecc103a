#ifndef PACSKETCH_JSON_IO_HPP
#define PACSKETCH_JSON_IO_HPP

// JSON and JSONL encodings of programs, datasets, tasks and reports.
//
// Every top-level object carries "schema": "pacsketch/1" and a "kind". JSONL
// files may start with such a header line; readers skip it. Infinite reals
// are written as the strings "inf" and "-inf".
//
// Sketch IR expressions:
//   {"const": true | 3 | 0.5 | "token"}   {"input": "x"}   {"truth": "y"}
//   {"apply": "le", "args": [...]}
//   {"spec": {"score": e, "threshold": 0.3 | "??" | "inf", "q": e,
//             "eps": 0.05 | "??", "mode": "cond" | "implies"}}
//
// List-language values: numbers, booleans, arrays for lists, null for bottom,
// {"image": {...record...}} for images, and {"digit": d} for a truth-only
// image in io examples.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pacsketch/harness.hpp"
#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/listdsl_lower.hpp"
#include "pacsketch/sketch_ir.hpp"
#include "pacsketch/sketcher.hpp"
#include "pacsketch/synthesizer.hpp"
#include "pacsketch/verifier.hpp"

namespace pacsketch::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "pacsketch/1";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json header(const std::string& kind);

Json real_to_json(double v);
double real_from_json(const Json& j);

Json const_to_json(const ir::Const& c);
ir::Const const_from_json(const Json& j);

Json expr_to_json(const ir::Expr& e);
ir::Expr expr_from_json(const Json& j);

Json valuation_to_json(const ir::Valuation& v);
ir::Valuation valuation_from_json(const Json& j);

Json record_to_json(const dsl::ImageRecord& r);
dsl::ImageRecord record_from_json(const Json& j);

Json value_to_json(const dsl::Value& v);
dsl::Value value_from_json(const Json& j);

Json example_to_json(const dsl::DslExample& ex);
dsl::DslExample example_from_json(const Json& j);

Json task_to_json(const TaskSpec& t);
/// Missing fields keep the TaskSpec defaults; "N": "auto" bounds list lengths.
TaskSpec task_from_json(const Json& j);

/// Program file: {"schema", "kind": "program", "expr": ...}; a bare
/// expression is accepted on input.
Json program_to_json(const ir::Expr& e);
ir::Expr program_from_json(const Json& j);

Json mistake_budget_to_json(const MistakeBudget& k);

Json sketch_report_to_json(const SketchReport& r);
Json verify_report_to_json(const VerifyReport& r);
Json monitor_verdict_to_json(const MonitorVerdict& v);
Json dsl_sketch_to_json(const dsl::DslSketch& s);
Json synthesis_to_json(const SynthesisResult& r, const TaskSpec& task);
Json metrics_to_json(const MetricsReport& m);
Json mc_report_to_json(const McReport& r);
Json task_run_to_json(const TaskRun& r);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Non-empty lines as JSON objects, without header lines.
std::vector<Json> read_jsonl(std::istream& in);
std::vector<Json> read_jsonl_file(const std::string& path);
/// A header line followed by one object per line.
void write_jsonl(std::ostream& out, const std::string& kind, const std::vector<Json>& rows);

bool is_header(const Json& j);

}  // namespace pacsketch::io

#endif  // PACSKETCH_JSON_IO_HPP
