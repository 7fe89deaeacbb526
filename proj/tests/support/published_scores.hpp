#pragma once

// Published per-category scores with their printed averages, three decimals
// as printed. Category order is the schema order.

#include <array>
#include <string_view>

namespace scisent::published {

struct Row {
  double average;
  std::array<double, 7> per_category;
};

struct ModelScores {
  std::string_view model;
  Row precision, recall, f1;
};

// Zero-shot prompting results on the test split.
inline constexpr std::array<ModelScores, 12> kZeroShot = {{
    {"Llama2",
     {0.542, {0.600, 0.455, 0.556, 0.404, 0.174, 0.667, 0.938}},
     {0.477, {0.545, 0.526, 0.278, 0.950, 0.191, 0.100, 0.750}},
     {0.455, {0.571, 0.488, 0.370, 0.567, 0.182, 0.174, 0.833}}},
    {"Llama3 8b",
     {0.471, {1.000, 1.000, 0.333, 0.204, 0.244, 0.000, 0.513}},
     {0.363, {0.091, 0.474, 0.056, 0.450, 0.524, 0.000, 0.950}},
     {0.312, {0.167, 0.643, 0.095, 0.281, 0.333, 0.000, 0.667}}},
    {"Llama3 70b",
     {0.862, {0.905, 1.000, 1.000, 0.377, 0.900, 0.850, 1.000}},
     {0.713, {0.864, 0.842, 0.056, 1.000, 0.429, 0.850, 0.950}},
     {0.694, {0.884, 0.914, 0.105, 0.548, 0.581, 0.850, 0.974}}},
    {"Mistral",
     {0.760, {0.654, 0.789, 0.833, 0.773, 0.739, 0.640, 0.895}},
     {0.736, {0.773, 0.789, 0.278, 0.850, 0.809, 0.800, 0.850}},
     {0.726, {0.708, 0.789, 0.417, 0.809, 0.773, 0.711, 0.872}}},
    {"Mixtral",
     {0.737, {0.682, 0.882, 0.538, 0.594, 0.909, 0.682, 0.870}},
     {0.720, {0.682, 0.789, 0.389, 0.950, 0.476, 0.750, 1.000}},
     {0.710, {0.682, 0.833, 0.452, 0.731, 0.625, 0.714, 0.930}}},
    {"Mistral Large",
     {0.797, {0.818, 0.727, 0.857, 0.500, 0.800, 0.875, 1.000}},
     {0.751, {0.818, 0.842, 0.333, 0.850, 0.762, 0.700, 0.950}},
     {0.749, {0.818, 0.780, 0.480, 0.630, 0.780, 0.778, 0.974}}},
    {"Gemma",
     {0.181, {0.158, 0.125, 0.125, 0.172, 0.227, 0.059, 0.400}},
     {0.157, {0.136, 0.158, 0.167, 0.250, 0.238, 0.050, 0.100}},
     {0.154, {0.146, 0.140, 0.143, 0.204, 0.233, 0.054, 0.160}}},
    {"Orca",
     {0.678, {0.533, 1.000, 0.275, 0.513, 0.900, 0.667, 0.857}},
     {0.561, {0.364, 0.526, 0.611, 1.000, 0.429, 0.400, 0.600}},
     {0.567, {0.432, 0.690, 0.379, 0.678, 0.581, 0.500, 0.706}}},
    {"Sonnet",
     {0.898, {1.000, 0.900, 1.000, 0.488, 1.000, 0.900, 1.000}},
     {0.822, {0.818, 0.947, 0.611, 1.000, 0.476, 0.900, 1.000}},
     {0.826, {0.900, 0.923, 0.759, 0.656, 0.645, 0.900, 1.000}}},
    {"Haiku",
     {0.733, {0.750, 0.875, 0.500, 0.486, 0.722, 0.800, 1.000}},
     {0.707, {0.818, 0.737, 0.222, 0.900, 0.619, 0.800, 0.850}},
     {0.701, {0.783, 0.800, 0.308, 0.632, 0.667, 0.800, 0.919}}},
    {"GPT-3.5",
     {0.624, {0.611, 1.000, 0.167, 0.404, 0.667, 0.516, 1.000}},
     {0.573, {0.500, 0.474, 0.056, 0.950, 0.381, 0.800, 0.850}},
     {0.553, {0.550, 0.643, 0.083, 0.567, 0.485, 0.627, 0.919}}},
    {"GPT-4",
     {0.824, {0.800, 1.000, 0.833, 0.556, 1.000, 0.809, 0.769}},
     {0.770, {0.727, 0.737, 0.556, 1.000, 0.524, 0.850, 1.000}},
     {0.768, {0.762, 0.849, 0.667, 0.714, 0.688, 0.829, 0.870}}},
}};

// Best model per architecture type.
inline constexpr std::array<ModelScores, 6> kBestByType = {{
    {"SciBERT (A)",
     {0.929, {1.000, 0.857, 0.941, 0.895, 0.857, 0.952, 1.000}},
     {0.928, {0.955, 0.947, 0.889, 0.850, 0.857, 1.000, 1.000}},
     {0.928, {0.977, 0.900, 0.914, 0.872, 0.857, 0.976, 1.000}}},
    {"Sonnet",
     {0.898, {1.000, 0.900, 1.000, 0.488, 1.000, 0.900, 1.000}},
     {0.822, {0.818, 0.947, 0.611, 1.000, 0.476, 0.900, 1.000}},
     {0.826, {0.900, 0.923, 0.759, 0.656, 0.645, 0.900, 1.000}}},
    {"Gemma2-2B (BL)",
     {0.931, {0.955, 0.864, 0.895, 0.947, 1.000, 0.857, 1.000}},
     {0.930, {0.955, 1.000, 0.944, 0.900, 0.809, 0.900, 1.000}},
     {0.928, {0.955, 0.927, 0.919, 0.923, 0.895, 0.878, 1.000}}},
    {"Nemotron-8B (BL)",
     {0.940, {0.950, 0.905, 0.889, 1.000, 1.000, 0.833, 1.000}},
     {0.937, {0.864, 1.000, 0.889, 0.900, 0.905, 1.000, 1.000}},
     {0.936, {0.905, 0.950, 0.889, 0.947, 0.950, 0.909, 1.000}}},
    {"GPT-4o-mini",
     {0.966, {1.000, 0.950, 1.000, 0.905, 1.000, 0.909, 1.000}},
     {0.963, {1.000, 1.000, 0.889, 0.950, 0.905, 1.000, 1.000}},
     {0.964, {1.000, 0.974, 0.941, 0.927, 0.950, 0.952, 1.000}}},
    {"T5 xxl",
     {0.910, {0.800, 0.864, 1.000, 0.809, 0.947, 0.950, 1.000}},
     {0.898, {0.909, 1.000, 0.722, 0.850, 0.857, 0.950, 1.000}},
     {0.899, {0.851, 0.927, 0.839, 0.829, 0.900, 0.950, 1.000}}},
}};

// The printed cross-model Average column of kBestByType: precision, recall, F1.
inline constexpr std::array<Row, 3> kBestByTypeAverage = {{
    {0.929, {0.951, 0.890, 0.954, 0.841, 0.967, 0.900, 1.000}},
    {0.913, {0.917, 0.982, 0.824, 0.908, 0.802, 0.958, 1.000}},
    {0.914, {0.931, 0.934, 0.877, 0.859, 0.866, 0.928, 1.000}},
}};

// Macro F1 pairs: (before, after, printed difference).
struct Delta {
  std::string_view model;
  double before, after, printed;
};

// Small and medium decoders, LoRA then NEFT.
inline constexpr std::array<Delta, 11> kLoraVsNeft = {{
    {"Olmo-1B", 0.902, 0.921, 0.019},     {"TinyLlama", 0.552, 0.702, 0.150},
    {"Arcee-lite", 0.878, 0.863, -0.015}, {"SmolLM2", 0.796, 0.782, -0.014},
    {"Gemma2-2B", 0.876, 0.815, -0.061},  {"Llama3.2-3B", 0.857, 0.843, -0.014},
    {"Phi3.5", 0.861, 0.869, 0.008},      {"Olmo-7B", 0.900, 0.929, 0.029},
    {"Mistral-7B", 0.933, 0.891, -0.042}, {"Arcee-Spark", 0.872, 0.891, 0.019},
    {"Llama3-8B", 0.892, 0.914, 0.022},
}};

// Base benchmark then augmented benchmark.
inline constexpr std::array<Delta, 8> kBaseVsAugmented = {{
    {"BERT", 0.590, 0.861, 0.271},      {"SciBERT", 0.870, 0.928, 0.058},
    {"BioBERT", 0.731, 0.878, 0.147},   {"BigBird", 0.646, 0.878, 0.232},
    {"Olmo-1B", 0.921, 0.912, -0.009},  {"TinyLlama", 0.702, 0.879, 0.177},
    {"Arcee-Lite", 0.878, 0.863, -0.015}, {"SmolLM2", 0.782, 0.914, 0.132},
}};

// Multi-rater agreement on the 140-sentence workshop set.
inline constexpr double kWorkshopKappa = 0.90;
inline constexpr std::array<double, 7> kWorkshopAc1 = {0.89, 0.78, 0.89, 0.89, 0.75, 0.93, 0.97};

}  // namespace scisent::published
