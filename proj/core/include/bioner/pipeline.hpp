#ifndef BIONER_PIPELINE_HPP
#define BIONER_PIPELINE_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bioner/model.hpp"

namespace bioner {

class PipelineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class StepSharing { Shareable, PerWorker };

/// One pipeline stage. apply() processes a single document and throws to
/// mark it failed; the error is recorded on the document's first section
/// and later steps skip it. Overriding apply_batch and throwing fails the
/// whole batch.
class Step {
  public:
    virtual ~Step() = default;
    virtual std::string name() const = 0;
    virtual void apply(Document& doc) = 0;

    /// Batch hook. The default applies apply() per document, isolating
    /// per-document failures. An override that throws fails the whole
    /// batch; the runner then recycles and retries the batch once before
    /// marking every document in it failed.
    virtual void apply_batch(const std::vector<Document*>& batch);
};

/// Marks a document failed and records (step, message) on its first
/// section (an empty section is created when the document has none).
void mark_failed(Document& doc, const std::string& step_name, const std::string& message);

struct StepDef {
    StepSharing sharing = StepSharing::Shareable;
    std::function<std::shared_ptr<Step>()> factory;
};

struct MemoryGuardConfig {
    std::size_t budget_bytes = 0;
    std::size_t check_interval_batches = 1;
    /// Resident-size estimator; defaults to the real process RSS.
    /// Injectable so guard behavior is deterministic under test.
    std::function<std::size_t()> estimator;
};

enum class GuardAction { Continue, Recycle };

/// Recycle iff the estimate strictly exceeds the budget.
GuardAction memory_guard_check(std::size_t resident_estimate, const MemoryGuardConfig& config);

/// Resident set size of the current process in bytes (from /proc).
std::size_t process_resident_bytes();

struct StepTiming {
    std::string name;
    double seconds = 0.0;
    std::size_t batches = 0;
    std::size_t samples = 0;

    double sec_per_step() const { return batches > 0 ? seconds / static_cast<double>(batches) : 0.0; }
    double samples_per_second() const { return seconds > 0.0 ? static_cast<double>(samples) / seconds : 0.0; }
};

struct RunReport {
    std::vector<StepTiming> per_step;
    std::size_t processed = 0;
    std::size_t failed = 0;
    std::size_t recycles = 0;
    double total_seconds = 0.0;
    double samples_per_second = 0.0;

    std::string to_json() const;
    std::string to_table() const;
};

struct RunOptions {
    std::size_t batch_size = 1;
    std::size_t workers = 1;
    std::optional<MemoryGuardConfig> guard;
};

struct RunResult {
    std::vector<Document> documents;
    RunReport report;
};

/// Ordered multi-step batch runner with per-document failure isolation.
class Pipeline {
  public:
    explicit Pipeline(std::vector<StepDef> steps);

    RunResult run(std::vector<Document> documents, const RunOptions& options) const;

  private:
    std::vector<StepDef> steps_;
};

/// Timed run preceded by an untimed warm-up pass over the same data.
RunResult bench(const Pipeline& pipeline, const std::vector<Document>& documents,
                std::size_t batch_size);

}  // namespace bioner

#endif
