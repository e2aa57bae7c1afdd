#include "quanv/quanvolve.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "quanv/hash.hpp"
#include "quanv/tensor_io.hpp"

namespace quanv {

void QuanvConfig::validate() const {
    if (patch_size < 1) throw config_error("patch size must be >= 1");
    if (stride < 1) throw config_error("stride must be >= 1");
    const int wanted = patch_size * patch_size;
    if (circuit.num_qubits != wanted) {
        throw config_error("patch " + std::to_string(patch_size) + "x" +
                           std::to_string(patch_size) + " needs a " + std::to_string(wanted) +
                           "-qubit circuit, got " + std::to_string(circuit.num_qubits) + " qubits");
    }
}

std::string QuanvConfig::serialize() const {
    std::string s = "patch=" + std::to_string(patch_size) + " stride=" + std::to_string(stride) +
                    " per_channel=" + (per_channel ? "1" : "0") + "\n";
    s += serialize_circuit(circuit);
    return s;
}

std::vector<double> encode_patch(std::span<const float> patch) {
    std::vector<double> angles(patch.size());
    for (std::size_t i = 0; i < patch.size(); ++i) {
        const float v = patch[i];
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw data_error("pixel value " + std::to_string(v) + " outside [0, 1] at patch index " +
                             std::to_string(i));
        }
        angles[i] = std::numbers::pi * static_cast<double>(v);
    }
    return angles;
}

std::uint32_t quanv_out_extent(std::uint32_t extent, int patch, int stride) {
    return (extent - static_cast<std::uint32_t>(patch)) / static_cast<std::uint32_t>(stride) + 1;
}

namespace {

int resolve_workers(int workers, std::size_t jobs) {
    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (static_cast<std::size_t>(workers) > jobs) workers = static_cast<int>(jobs);
    return workers < 1 ? 1 : workers;
}

// Runs fn(job) for job in [0, jobs) across `workers` threads. Jobs are
// pure and write disjoint output slots, so the schedule cannot change
// the result.
template <typename Fn>
void parallel_for(std::size_t jobs, int workers, Fn&& fn) {
    workers = resolve_workers(workers, jobs);
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= jobs || failed.load(std::memory_order_relaxed)) return;
                try {
                    fn(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void check_image_range(const Tensor& image) {
    for (float v : image.data) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw data_error("image value " + std::to_string(v) + " outside [0, 1]");
        }
    }
}

} // namespace

Tensor quanvolve_image(const Tensor& image, const QuanvConfig& cfg, int workers,
                       std::uint64_t* evals) {
    cfg.validate();
    if (image.rank() != 3) {
        throw shape_error("quanvolve_image expects H x W x C, got " + shape_to_string(image.shape));
    }
    const std::uint32_t h = image.shape[0], w = image.shape[1], c = image.shape[2];
    const auto k = static_cast<std::uint32_t>(cfg.patch_size);
    if (h < k || w < k) {
        throw shape_error("image " + shape_to_string(image.shape) + " smaller than patch " +
                          std::to_string(k) + "x" + std::to_string(k));
    }
    check_image_range(image);

    const std::uint32_t oh = quanv_out_extent(h, cfg.patch_size, cfg.stride);
    const std::uint32_t ow = quanv_out_extent(w, cfg.patch_size, cfg.stride);
    const std::uint32_t kk = k * k;
    Tensor out({oh, ow, c * kk});

    const std::size_t jobs = std::size_t{oh} * ow * c;
    std::atomic<std::uint64_t> eval_count{0};
    parallel_for(jobs, workers, [&](std::size_t job) {
        const std::uint32_t ch = static_cast<std::uint32_t>(job % c);
        const std::uint32_t ox = static_cast<std::uint32_t>((job / c) % ow);
        const std::uint32_t oy = static_cast<std::uint32_t>(job / (std::size_t{c} * ow));

        std::vector<float> patch(kk);
        const std::uint32_t iy = oy * static_cast<std::uint32_t>(cfg.stride);
        const std::uint32_t ix = ox * static_cast<std::uint32_t>(cfg.stride);
        for (std::uint32_t py = 0; py < k; ++py) {
            for (std::uint32_t px = 0; px < k; ++px) {
                patch[py * k + px] = image.at(iy + py, ix + px, ch);
            }
        }

        const std::vector<double> z = run_circuit(cfg.circuit, encode_patch(patch));
        eval_count.fetch_add(1, std::memory_order_relaxed);
        for (std::uint32_t q = 0; q < kk; ++q) {
            out.at(oy, ox, ch * kk + q) = static_cast<float>(z[q]);
        }
    });
    if (evals) *evals += eval_count.load();
    return out;
}

std::string quanvolve_cache_key(const Tensor& images, const QuanvConfig& cfg,
                                const std::string& dataset_id) {
    std::uint64_t h = fnv1a_offset;
    h = fnv1a_update(h, "quanv-cache-v1\n", 15);
    h = fnv1a_update(h, dataset_id.data(), dataset_id.size());
    h = fnv1a_update(h, "\n", 1);
    const std::string shape = shape_to_string(images.shape);
    h = fnv1a_update(h, shape.data(), shape.size());
    h = fnv1a_update(h, images.data.data(), images.data.size() * sizeof(float));
    const std::string cfg_text = cfg.serialize();
    h = fnv1a_update(h, cfg_text.data(), cfg_text.size());
    return to_hex(h);
}

QuanvolveResult quanvolve_dataset(const Tensor& images, const QuanvConfig& cfg,
                                  const std::string& dataset_id,
                                  const std::filesystem::path& cache_dir, int workers) {
    cfg.validate();
    if (images.rank() != 4) {
        throw shape_error("quanvolve_dataset expects N x H x W x C, got " +
                          shape_to_string(images.shape));
    }

    QuanvolveResult result;
    result.key_hex = quanvolve_cache_key(images, cfg, dataset_id);
    std::filesystem::create_directories(cache_dir);
    result.cache_file = cache_dir / (result.key_hex + ".qtn");

    if (std::filesystem::exists(result.cache_file)) {
        try {
            result.tensor = read_tensor(result.cache_file);
            result.cache_hit = true;
            return result;
        } catch (const data_error&) {
            // corrupt cache entry: recompute and overwrite
            result.recovered_from_corruption = true;
        }
    }

    const std::uint32_t n = images.shape[0];
    const std::uint32_t oh = quanv_out_extent(images.shape[1], cfg.patch_size, cfg.stride);
    const std::uint32_t ow = quanv_out_extent(images.shape[2], cfg.patch_size, cfg.stride);
    const std::uint32_t oc = images.shape[3] * static_cast<std::uint32_t>(cfg.patch_size) *
                             static_cast<std::uint32_t>(cfg.patch_size);
    Tensor out({n, oh, ow, oc});

    // Fan out across images; quanvolve_image stays serial per image so
    // each output slice is written by exactly one worker.
    std::atomic<std::uint64_t> evals{0};
    const std::size_t item = std::size_t{oh} * ow * oc;
    parallel_for(n, workers, [&](std::size_t i) {
        std::uint64_t local = 0;
        const Tensor mapped = quanvolve_image(images.slice(i), cfg, 1, &local);
        std::copy(mapped.data.begin(), mapped.data.end(),
                  out.data.begin() + static_cast<std::ptrdiff_t>(i * item));
        evals.fetch_add(local, std::memory_order_relaxed);
    });
    result.circuit_evals = evals.load();

    // single-writer cache: write to a temp file, then atomic rename
    const std::filesystem::path tmp = result.cache_file.string() + ".tmp";
    write_tensor(out, tmp);
    std::filesystem::rename(tmp, result.cache_file);

    result.tensor = std::move(out);
    return result;
}

} // namespace quanv
