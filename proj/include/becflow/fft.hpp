#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <span>
#include <stdexcept>

namespace becflow {

/// In-place complex-to-complex FFT of fixed size, backed by FFTW.
///
/// Plans are created with FFTW_ESTIMATE so results are reproducible across
/// runs. Data is staged through an internal aligned buffer, which keeps the
/// SIMD plan valid for any caller memory. Plan creation/destruction is
/// serialized globally (the FFTW planner is not reentrant); execution is
/// safe from multiple threads as long as each thread owns its transform.
class FourierTransform {
public:
    explicit FourierTransform(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("FourierTransform: size must be positive");
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw std::bad_alloc();
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~FourierTransform() {
        if (buf_) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(fwd_);
            fftw_destroy_plan(bwd_);
            fftw_free(buf_);
        }
    }

    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    FourierTransform(FourierTransform&& other) noexcept
        : n_(other.n_), buf_(other.buf_), fwd_(other.fwd_), bwd_(other.bwd_) {
        other.buf_ = nullptr;
    }

    std::size_t size() const { return n_; }

    /// In-place forward DFT (unnormalized).
    void forward(std::span<std::complex<double>> data) const {
        check(data.size());
        std::memcpy(buf_, data.data(), sizeof(fftw_complex) * n_);
        fftw_execute(fwd_);
        std::memcpy(data.data(), buf_, sizeof(fftw_complex) * n_);
    }

    /// In-place inverse DFT, normalized by 1/n.
    void inverse(std::span<std::complex<double>> data) const {
        check(data.size());
        std::memcpy(buf_, data.data(), sizeof(fftw_complex) * n_);
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(n_);
        auto* out = reinterpret_cast<std::complex<double>*>(buf_);
        for (std::size_t i = 0; i < n_; ++i) data[i] = out[i] * scale;
    }

private:
    void check(std::size_t len) const {
        if (len != n_) throw std::invalid_argument("FourierTransform: length mismatch");
    }

    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    std::size_t n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_{}, bwd_{};
};

} // namespace becflow
