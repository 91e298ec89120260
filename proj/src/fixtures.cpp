#include "lcu/fixtures.hpp"

#include "json.hpp"

namespace lcu {

DatasetParams rwswt_dataset() {
  DatasetParams p;
  p.name = "rwswt";
  p.N = 108;
  p.lambda_T = 1490.0;
  p.lambda_W = 34552.0;
  p.lambda_V = 8373.0;
  p.L = 200;
  p.sparse_unique_v = 435023;
  p.reallocate_error = false;

  p.lowrank_clean_k = {64, 512};
  p.sparse_k = {0, 0};  // optimize; lands on 64 / 512

  // l (N^2/8 + N/4) = 1485 l added as 1 + 4 + 8 + 64 + 128 + 256 + 1024.
  p.contiguous.terms = {{1, +1, 0},   {4, +1, 0},   {8, +1, 0},  {64, +1, 0},
                        {128, +1, 0}, {256, +1, 0}, {1024, +1, 0}};

  // Combined superposition over l, p, q, r, s with a 15-of-16 ancilla and
  // two amplification steps.
  SuperpositionPrepSpec prep;
  prep.name = "l_p_q_r_s";
  prep.state_tests = {{6, false, 0}, {6, false, 0}, {6, true, 54}, {6, true, 54}, {8, true, 201}};
  prep.ancilla_test = IneqTestSpec{4, true, 15};
  prep.state_qubits = 36;
  prep.ancilla_bits = 4;
  prep.aa_steps = 2;
  prep.success_states = 15.0 * 201.0 * 1485.0 * 1485.0;
  prep.total_bits = 36;
  p.superposition_lowrank = {prep};

  SuperpositionPrepSpec sparse;
  sparse.name = "sparse_index";
  sparse.state_tests = {{19, true, 436508}};
  sparse.ancilla_test = IneqTestSpec{6, true, 19};
  sparse.state_qubits = 25;
  sparse.ancilla_bits = 6;
  sparse.aa_steps = 1;
  sparse.success_states = 19.0 * 436508.0;
  sparse.total_bits = 25;
  // Published reflection line counts 24 reflected qubits (19 + 5) where the
  // ancilla register actually has 6; carried as published.
  sparse.reflection_cost_override = 22;
  p.superposition_sparse = sparse;

  // Published sparse ledger lists ceil(log2(d/k)) = 12 where the formula
  // gives 13; carried as published so the qubit total reproduces 5,103.
  p.sparse_workspace_adjust = -1;
  p.dataset_notes = {
      "clean-variant second preparation computes to 8,380; the published line is 8,379 "
      "(per-step 18,578 published vs 18,579 computed, a one-unit ceiling-convention gap)",
      "sparse-variant iteration workspace carried as the published 12 qubits; ceil(log2(d/k)) "
      "gives 13"};
  return p;
}

DatasetParams llduc_dataset() {
  DatasetParams p;
  p.name = "llduc";
  p.N = 152;
  p.lambda_T = 3446.0;
  p.lambda_W = 20746.0;
  p.lambda_V = 4168.0;
  p.L = 200;
  p.sparse_unique_v = 176572;
  p.reallocate_error = true;  // m = 25 for the low-rank variants

  p.lowrank_clean_k = {64, 512};  // published choice; 128 would edge out 64 on the compute side
  p.sparse_k = {0, 0};
  p.sparse_max_k_compute = 32;  // published cap: 64 is marginally cheaper but doubles ancillae

  // 2926 l as 1024 - 128 - 16 - 2 + 2048. The two width overrides carry the
  // published register widths for the middle subtractions (the tracked
  // maxima need 18 bits there).
  p.contiguous.terms = {
      {1024, +1, 0}, {128, -1, 0}, {16, -1, 17}, {2, -1, 17}, {2048, +1, 0}};

  SuperpositionPrepSpec prep1;
  prep1.name = "l_p_q";
  prep1.state_tests = {{7, false, 0}, {7, true, 76}, {8, true, 201}};
  prep1.ancilla_test = IneqTestSpec{4, true, 11};
  prep1.state_qubits = 26;
  prep1.ancilla_bits = 4;
  prep1.aa_steps = 2;
  prep1.success_states = 11.0 * 2926.0 * 201.0;
  prep1.total_bits = 26;
  prep1.flag_cost_override = 1;  // published assembly flags success with one Toffoli

  SuperpositionPrepSpec prep2;
  prep2.name = "r_s";
  prep2.state_tests = {{7, false, 0}, {7, true, 76}};
  prep2.ancilla_test = IneqTestSpec{5, true, 17};
  prep2.state_qubits = 19;
  prep2.ancilla_bits = 5;
  prep2.aa_steps = 2;
  prep2.success_states = 17.0 * 2926.0;
  prep2.total_bits = 19;
  prep2.reflection_cost_override = 20;  // published reflection line
  p.superposition_lowrank = {prep1, prep2};

  SuperpositionPrepSpec sparse;
  sparse.name = "sparse_index";
  sparse.state_tests = {{18, true, 179498}};
  sparse.ancilla_test = IneqTestSpec{3, true, 3};
  sparse.state_qubits = 21;
  sparse.ancilla_bits = 3;
  sparse.aa_steps = 1;
  sparse.success_states = 3.0 * 179498.0;
  sparse.total_bits = 21;
  p.superposition_sparse = sparse;

  // Published clean-variant qubit ledger keeps the unreallocated m = 26 on
  // the phase register even though the step count uses m = 25.
  p.ledger_m_override_lowrank_clean = 26;
  p.dataset_notes = {
      "clean-variant phase register carried at the published m = 26; the repetition count uses "
      "the reallocated m = 25"};
  return p;
}

DatasetParams paper_dataset(const std::string& name) {
  if (name == "rwswt") return rwswt_dataset();
  if (name == "llduc") return llduc_dataset();
  throw std::invalid_argument("unknown paper dataset: " + name);
}

DatasetParams apply_fixture_overrides(DatasetParams base, const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  if (j.contains("lambda_T")) base.lambda_T = j["lambda_T"].get<double>();
  if (j.contains("lambda_W")) base.lambda_W = j["lambda_W"].get<double>();
  if (j.contains("lambda_V")) base.lambda_V = j["lambda_V"].get<double>();
  if (j.contains("L")) base.L = j["L"].get<int>();
  if (j.contains("sparse_unique_v")) base.sparse_unique_v = j["sparse_unique_v"].get<long long>();
  if (j.contains("delta_e")) base.delta_e = j["delta_e"].get<double>();
  return base;
}

}  // namespace lcu
