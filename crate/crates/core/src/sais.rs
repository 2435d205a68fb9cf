//! Suffix sorting by induced sorting (SA-IS).
//!
//! No terminator is assumed: the end of the string compares smaller than any
//! symbol, so the result is the plain suffix order of the input.

const NONE: u32 = u32::MAX;

/// Sorts the suffixes of a byte string.
pub fn suffix_array(text: &[u8]) -> Vec<u32> {
    assert!(
        text.len() < NONE as usize,
        "texts of 2^32 - 1 bytes or more are not supported"
    );
    let s: Vec<u32> = text.iter().map(|&b| u32::from(b)).collect();
    sa_is(&s, 255)
}

fn sa_is(s: &[u32], upper: u32) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ => {}
    }
    let upper = upper as usize;

    // ls[i]: suffix i is S-type.
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] { ls[i + 1] } else { s[i] < s[i + 1] };
    }

    // Bucket starts: sum_l[c] for L-type, sum_s[c] for S-type suffixes.
    let mut sum_l = vec![0u32; upper + 1];
    let mut sum_s = vec![0u32; upper + 1];
    for i in 0..n {
        if ls[i] {
            if (s[i] as usize) < upper {
                sum_l[s[i] as usize + 1] += 1;
            }
        } else {
            sum_s[s[i] as usize] += 1;
        }
    }
    for c in 0..=upper {
        sum_s[c] += sum_l[c];
        if c < upper {
            sum_l[c + 1] += sum_s[c];
        }
    }

    let mut sa = vec![NONE; n];
    let mut buf = vec![0u32; upper + 1];
    let mut induce = |lms: &[u32], sa: &mut [u32]| {
        sa.fill(NONE);
        buf.copy_from_slice(&sum_s);
        for &d in lms {
            let d = d as usize;
            if d == n {
                continue;
            }
            let b = &mut buf[s[d] as usize];
            sa[*b as usize] = d as u32;
            *b += 1;
        }
        buf.copy_from_slice(&sum_l);
        let b = &mut buf[s[n - 1] as usize];
        sa[*b as usize] = (n - 1) as u32;
        *b += 1;
        for i in 0..n {
            let v = sa[i];
            if v != NONE && v >= 1 && !ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize;
                sa[buf[c] as usize] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != NONE && v >= 1 && ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize + 1;
                buf[c] -= 1;
                sa[buf[c] as usize] = v - 1;
            }
        }
    };

    let mut lms_map = vec![NONE; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();
    induce(&lms, &mut sa);

    if m > 0 {
        let mut sorted_lms: Vec<u32> = sa.iter().copied().filter(|&v| lms_map[v as usize] != NONE).collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0u32;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        let next_lms = |v: usize| {
            let idx = lms_map[v] as usize + 1;
            if idx < m {
                lms[idx] as usize
            } else {
                n
            }
        };
        for i in 1..m {
            let mut l = sorted_lms[i - 1] as usize;
            let mut r = sorted_lms[i] as usize;
            let end_l = next_lms(l);
            let end_r = next_lms(r);
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper;
        }
        let rec_sa = sa_is(&rec_s, rec_upper);
        for (slot, &r) in sorted_lms.iter_mut().zip(&rec_sa) {
            *slot = lms[r as usize];
        }
        induce(&sorted_lms, &mut sa);
    }
    sa
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(text: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..text.len() as u32).collect();
        sa.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        sa
    }

    #[test]
    fn small_strings() {
        for t in [
            &b""[..],
            b"a",
            b"ab",
            b"ba",
            b"aa",
            b"banana",
            b"mississippi",
            b"abab",
            b"aaaa",
        ] {
            assert_eq!(suffix_array(t), naive(t), "{:?}", t);
        }
        assert_eq!(suffix_array(b"banana"), vec![5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn extreme_bytes() {
        let t = [255u8, 0, 255, 255, 0, 0, 1, 255];
        assert_eq!(suffix_array(&t), naive(&t));
    }

    proptest! {
        #[test]
        fn matches_comparison_sort(text in prop::collection::vec(0u8..4, 0..600)) {
            prop_assert_eq!(suffix_array(&text), naive(&text));
        }

        #[test]
        fn matches_comparison_sort_full_alphabet(text in prop::collection::vec(any::<u8>(), 0..300)) {
            prop_assert_eq!(suffix_array(&text), naive(&text));
        }
    }
}
