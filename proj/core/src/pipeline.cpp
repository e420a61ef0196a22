#include "bioner/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "json.hpp"

namespace bioner {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void mark_failed(Document& doc, const std::string& step_name, const std::string& message) {
    doc.failed = true;
    if (doc.sections.empty()) doc.sections.push_back({});
    doc.sections.front().errors.push_back({step_name, message});
}

void Step::apply_batch(const std::vector<Document*>& batch) {
    for (Document* doc : batch) {
        try {
            apply(*doc);
        } catch (const std::exception& e) {
            mark_failed(*doc, name(), e.what());
        }
    }
}

GuardAction memory_guard_check(std::size_t resident_estimate, const MemoryGuardConfig& config) {
    return resident_estimate > config.budget_bytes ? GuardAction::Recycle : GuardAction::Continue;
}

std::size_t process_resident_bytes() {
    std::ifstream statm("/proc/self/statm");
    std::size_t pages_total = 0;
    std::size_t pages_resident = 0;
    if (!(statm >> pages_total >> pages_resident)) return 0;
    return pages_resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

std::string RunReport::to_json() const {
    json steps = json::array();
    for (const StepTiming& s : per_step) {
        steps.push_back({{"name", s.name},
                         {"seconds", s.seconds},
                         {"batches", s.batches},
                         {"samples", s.samples},
                         {"sec_per_step", s.sec_per_step()},
                         {"samples_per_second", s.samples_per_second()}});
    }
    return json{{"per_step", steps},
                {"processed", processed},
                {"failed", failed},
                {"recycles", recycles},
                {"total_seconds", total_seconds},
                {"samples_per_second", samples_per_second}}
        .dump(2);
}

std::string RunReport::to_table() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(24) << "step" << std::right << std::setw(12) << "seconds"
        << std::setw(10) << "batches" << std::setw(14) << "sec/step" << std::setw(14)
        << "samples/s" << '\n';
    for (const StepTiming& s : per_step) {
        out << std::left << std::setw(24) << s.name << std::right << std::setw(12) << s.seconds
            << std::setw(10) << s.batches << std::setw(14) << s.sec_per_step() << std::setw(14)
            << s.samples_per_second() << '\n';
    }
    out << "processed=" << processed << " failed=" << failed << " recycles=" << recycles
        << " total_seconds=" << total_seconds << " samples_per_second=" << samples_per_second
        << '\n';
    return out.str();
}

Pipeline::Pipeline(std::vector<StepDef> steps) : steps_(std::move(steps)) {
    for (const StepDef& def : steps_) {
        if (!def.factory) throw PipelineError("step definition without a factory");
    }
}

namespace {

struct WorkerOutcome {
    std::vector<StepTiming> timings;
    std::size_t recycles = 0;
};

// Runs the whole batch sequence for one worker shard.
WorkerOutcome run_shard(const std::vector<StepDef>& defs,
                        const std::vector<std::shared_ptr<Step>>& shared_instances,
                        std::vector<Document*>& docs, const RunOptions& options) {
    WorkerOutcome outcome;
    std::vector<std::shared_ptr<Step>> steps(defs.size());
    auto instantiate = [&] {
        for (std::size_t i = 0; i < defs.size(); ++i) {
            steps[i] = defs[i].sharing == StepSharing::Shareable ? shared_instances[i]
                                                                 : defs[i].factory();
        }
    };
    instantiate();
    outcome.timings.resize(defs.size());
    for (std::size_t i = 0; i < defs.size(); ++i) outcome.timings[i].name = steps[i]->name();

    const std::size_t batch_size = options.batch_size;
    std::size_t batch_counter = 0;
    for (std::size_t offset = 0; offset < docs.size(); offset += batch_size) {
        std::vector<Document*> batch(
            docs.begin() + static_cast<std::ptrdiff_t>(offset),
            docs.begin() + static_cast<std::ptrdiff_t>(std::min(offset + batch_size, docs.size())));
        for (std::size_t si = 0; si < steps.size(); ++si) {
            std::vector<Document*> live;
            for (Document* d : batch) {
                if (!d->failed) live.push_back(d);
            }
            if (live.empty()) continue;
            const auto start = Clock::now();
            bool retried = false;
            while (true) {
                try {
                    steps[si]->apply_batch(live);
                    break;
                } catch (const std::exception& e) {
                    if (!retried) {
                        // Whole-batch failure: recycle per-worker steps and
                        // retry the in-flight batch once.
                        retried = true;
                        ++outcome.recycles;
                        instantiate();
                        continue;
                    }
                    for (Document* d : live) mark_failed(*d, steps[si]->name(), e.what());
                    break;
                }
            }
            const auto stop = Clock::now();
            outcome.timings[si].seconds += std::chrono::duration<double>(stop - start).count();
            outcome.timings[si].batches += 1;
            outcome.timings[si].samples += live.size();
        }
        ++batch_counter;
        if (options.guard && batch_counter % options.guard->check_interval_batches == 0) {
            const std::size_t estimate = options.guard->estimator
                                             ? options.guard->estimator()
                                             : process_resident_bytes();
            if (memory_guard_check(estimate, *options.guard) == GuardAction::Recycle) {
                ++outcome.recycles;
                instantiate();
            }
        }
    }
    return outcome;
}

}  // namespace

RunResult Pipeline::run(std::vector<Document> documents, const RunOptions& options) const {
    if (options.batch_size < 1) throw PipelineError("batch_size must be >= 1");
    if (options.workers < 1) throw PipelineError("workers must be >= 1");
    if (options.guard && options.guard->check_interval_batches < 1) {
        throw PipelineError("guard check interval must be >= 1");
    }

    std::vector<std::shared_ptr<Step>> shared_instances(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].sharing == StepSharing::Shareable) shared_instances[i] = steps_[i].factory();
    }

    const auto run_start = Clock::now();
    const std::size_t workers = std::min(options.workers, std::max<std::size_t>(documents.size(), 1));
    std::vector<std::vector<Document*>> shards(workers);
    for (std::size_t i = 0; i < documents.size(); ++i) {
        shards[i % workers].push_back(&documents[i]);
    }
    std::vector<WorkerOutcome> outcomes(workers);
    if (workers == 1) {
        outcomes[0] = run_shard(steps_, shared_instances, shards[0], options);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                outcomes[w] = run_shard(steps_, shared_instances, shards[w], options);
            });
        }
        for (std::thread& t : threads) t.join();
    }
    const auto run_stop = Clock::now();

    RunResult result;
    result.report.per_step.resize(steps_.size());
    for (std::size_t w = 0; w < workers; ++w) {
        result.report.recycles += outcomes[w].recycles;
        for (std::size_t si = 0; si < steps_.size(); ++si) {
            StepTiming& agg = result.report.per_step[si];
            const StepTiming& part = outcomes[w].timings[si];
            agg.name = part.name;
            agg.seconds += part.seconds;
            agg.batches += part.batches;
            agg.samples += part.samples;
        }
    }
    for (const Document& d : documents) {
        if (d.failed) {
            ++result.report.failed;
        } else {
            ++result.report.processed;
        }
    }
    result.report.total_seconds = std::chrono::duration<double>(run_stop - run_start).count();
    result.report.samples_per_second =
        result.report.total_seconds > 0.0
            ? static_cast<double>(documents.size()) / result.report.total_seconds
            : 0.0;
    result.documents = std::move(documents);
    return result;
}

RunResult bench(const Pipeline& pipeline, const std::vector<Document>& documents,
                std::size_t batch_size) {
    if (documents.empty()) throw PipelineError("benchmark dataset is empty");
    RunOptions options;
    options.batch_size = batch_size;
    pipeline.run(documents, options);  // warm-up, untimed
    return pipeline.run(documents, options);
}

}  // namespace bioner
