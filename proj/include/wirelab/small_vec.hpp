#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <type_traits>

namespace wirelab {

/// Vector with a small inline buffer, for the tiny per-operation arrays
/// (id components, wire references) that dominate allocation traffic in the
/// rewrite passes. Spills to the heap past N elements.
template <typename T, std::size_t N>
class SmallVec {
    static_assert(std::is_trivially_copyable_v<T>);

public:
    SmallVec() = default;

    SmallVec(const SmallVec& other) { assign_from(other); }

    SmallVec(SmallVec&& other) noexcept { steal(other); }

    SmallVec& operator=(const SmallVec& other) {
        if (this != &other) {
            release();
            assign_from(other);
        }
        return *this;
    }

    SmallVec& operator=(SmallVec&& other) noexcept {
        if (this != &other) {
            release();
            steal(other);
        }
        return *this;
    }

    ~SmallVec() { release(); }

    void push_back(const T& value) {
        if (size_ == capacity_) grow(capacity_ * 2);
        data()[size_++] = value;
    }

    void reserve(std::size_t n) {
        if (n > capacity_) grow(static_cast<std::uint32_t>(n));
    }

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool empty() const { return size_ == 0; }

    [[nodiscard]] T* data() { return heap_ ? heap_ : inline_; }
    [[nodiscard]] const T* data() const { return heap_ ? heap_ : inline_; }

    [[nodiscard]] T& operator[](std::size_t i) { return data()[i]; }
    [[nodiscard]] const T& operator[](std::size_t i) const { return data()[i]; }

    [[nodiscard]] const T& at(std::size_t i) const {
        if (i >= size_) throw std::out_of_range("SmallVec::at");
        return data()[i];
    }

    [[nodiscard]] T& back() { return data()[size_ - 1]; }
    [[nodiscard]] const T& back() const { return data()[size_ - 1]; }

    [[nodiscard]] T* begin() { return data(); }
    [[nodiscard]] T* end() { return data() + size_; }
    [[nodiscard]] const T* begin() const { return data(); }
    [[nodiscard]] const T* end() const { return data() + size_; }

    friend bool operator==(const SmallVec& a, const SmallVec& b) {
        if (a.size_ != b.size_) return false;
        return std::memcmp(a.data(), b.data(), a.size_ * sizeof(T)) == 0;
    }

private:
    void grow(std::uint32_t new_capacity) {
        if (new_capacity < size_ + 1) new_capacity = size_ + 1;
        T* fresh = new T[new_capacity];
        std::memcpy(fresh, data(), size_ * sizeof(T));
        delete[] heap_;
        heap_ = fresh;
        capacity_ = new_capacity;
    }

    void assign_from(const SmallVec& other) {
        size_ = other.size_;
        if (other.size_ <= N) {
            heap_ = nullptr;
            capacity_ = N;
            std::memcpy(inline_, other.data(), other.size_ * sizeof(T));
        } else {
            heap_ = new T[other.size_];
            capacity_ = other.size_;
            std::memcpy(heap_, other.heap_, other.size_ * sizeof(T));
        }
    }

    void steal(SmallVec& other) noexcept {
        size_ = other.size_;
        if (other.heap_) {
            heap_ = other.heap_;
            capacity_ = other.capacity_;
            other.heap_ = nullptr;
        } else {
            heap_ = nullptr;
            capacity_ = N;
            std::memcpy(inline_, other.inline_, other.size_ * sizeof(T));
        }
        other.size_ = 0;
        other.capacity_ = N;
    }

    void release() {
        delete[] heap_;
        heap_ = nullptr;
        size_ = 0;
        capacity_ = N;
    }

    T inline_[N]{};
    T* heap_ = nullptr;
    std::uint32_t size_ = 0;
    std::uint32_t capacity_ = N;
};

}  // namespace wirelab
