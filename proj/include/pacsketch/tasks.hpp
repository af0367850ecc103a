#ifndef PACSKETCH_TASKS_HPP
#define PACSKETCH_TASKS_HPP

// Built-in digit-list tasks and their synthetic datasets.
//
//   sum         sum of the digits in input1
//   max         largest digit in input1 (0 for no digits)
//   cond_sum    sum of the digits y in input2 with input1 <= y
//   prefix_max  largest of the first input1 digits of input2
//   cond_count  number of digits y in input2 with input1 <= y
//
// Variants choose the component set:
//   integer  + - max <= = >= predict_int
//   real     adds cond-<= cond->= predict_float; sums and maxima are floats
//   flip     integer components plus cond-flip; images may be stored upside
//            down and the program straightens them before predicting
//   fast     integer components run on the fast predictor

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pacsketch/listdsl.hpp"
#include "pacsketch/listdsl_data.hpp"
#include "pacsketch/synthesizer.hpp"

namespace pacsketch {

enum class TaskVariant { integer, real, flip, fast };

std::string variant_name(TaskVariant v);
/// Throws std::invalid_argument on an unknown name.
TaskVariant parse_variant(std::string_view name);

const std::vector<std::string>& task_names();

/// Throws std::invalid_argument on an unknown task.
TaskSpec make_task(std::string_view name, TaskVariant variant = TaskVariant::integer);

/// n examples drawn to match the task's input types: an image input is one
/// random digit, a list input holds 1..max_len random digits.
std::vector<dsl::DslExample> generate_task_data(const TaskSpec& task,
                                                const dsl::PredictorConfig& cfg, std::size_t n,
                                                std::uint64_t seed, std::size_t max_len = 3);

}  // namespace pacsketch

#endif  // PACSKETCH_TASKS_HPP
