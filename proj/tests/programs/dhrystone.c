// Dhrystone-class integer workload: record copies, string compares,
// enumerations, small procedure calls and pointer chasing.
#ifdef HOST
#include <stdio.h>
#include <string.h>
#else
#include "runtime.h"
#endif

#define ITERATIONS 2000
#define EXPECTED_HASH 0x0003a88au

typedef enum { KIND_A, KIND_B, KIND_C, KIND_D, KIND_E } kind_t;

typedef struct record {
  struct record *next;
  kind_t kind;
  int ival;
  int counter;
  char text[31];
} record_t;

static record_t pool[2];
static record_t *head;
static int glob_int;
static char glob_char_a, glob_char_b;
static int table1[50];
static int table2[50][50];
static char str_a[31], str_b[31];

static __attribute__((noinline)) kind_t classify_char(char c, char ref) {
  if (c != ref) return KIND_A;
  glob_char_a = c;
  return KIND_B;
}

static __attribute__((noinline)) int compare_strings(const char *s1, const char *s2) {
  int i = 2;
  char c = 0;
  while (i <= 2) {
    if (classify_char(s1[i], s2[i + 1]) == KIND_A) {
      c = 'A';
      ++i;
    }
  }
  if (c >= 'W' && c < 'Z') i = 7;
  if (c == 'R') return 1;
  if (strcmp(s1, s2) > 0) {
    glob_int = i + 7;
    return 1;
  }
  return 0;
}

static __attribute__((noinline)) int kind_is_c(kind_t k) { return k == KIND_C; }

static __attribute__((noinline)) kind_t next_kind(kind_t k) {
  kind_t r = k;
  if (!kind_is_c(k)) r = KIND_D;
  switch (k) {
    case KIND_A: r = KIND_A; break;
    case KIND_B: r = glob_int > 100 ? KIND_A : KIND_D; break;
    case KIND_C: r = KIND_B; break;
    case KIND_D: break;
    case KIND_E: r = KIND_C; break;
  }
  return r;
}

static __attribute__((noinline)) void add_small(int a, int b, int *out) { *out = b + a + 2; }

static __attribute__((noinline)) void fill_tables(int *t1, int (*t2)[50], int a, int b) {
  const int idx = a + 5;
  t1[idx] = b;
  t1[idx + 1] = t1[idx];
  t1[idx + 30] = idx;
  for (int j = idx; j <= idx + 1; ++j) t2[idx][j] = idx;
  t2[idx][idx - 1] += 1;
  t2[idx + 20][idx] = t1[idx];
  glob_int = 5;
}

static __attribute__((noinline)) void bump(int *p) {
  int v = *p + 10;
  for (;;) {
    if (glob_char_a == 'A') {
      --v;
      *p = v - glob_int;
      break;
    }
    break;
  }
}

static __attribute__((noinline)) void update_record(record_t *r) {
  record_t *next = r->next;
  *next = *head;
  r->ival = 5;
  next->ival = r->ival;
  next->next = r->next;
  if (next->kind == KIND_A) {
    next->ival = 6;
    next->kind = next_kind(r->kind);
    next->next = head->next;
    add_small(next->ival, 10, &next->ival);
  } else {
    *r = *next;
  }
}

static __attribute__((noinline)) void set_char(void) { glob_char_b = 'B'; }

static __attribute__((noinline)) void check_char(void) {
  const int ok = glob_char_a == 'A';
  glob_int = ok | glob_int;
  glob_char_b = 'B';
}

int main(void) {
  head = &pool[0];
  head->next = &pool[1];
  head->kind = KIND_A;
  head->ival = 40;
  head->counter = 0;
  strcpy(head->text, "RECORD TEXT, SOME STRING VALUE");
  strcpy(str_a, "FIRST STRING OF THE PROGRAM...");
  table2[8][7] = 10;

  int i1 = 0, i2 = 0, i3 = 0;
  kind_t k = KIND_B;
  for (int run = 1; run <= ITERATIONS; ++run) {
    set_char();
    check_char();
    i1 = 2;
    i2 = 3;
    strcpy(str_b, "SECOND STRING OF THE PROGRAM.");
    k = KIND_B;
    const int cmp = !compare_strings(str_a, str_b);
    while (i1 < i2) {
      i3 = 5 * i1 - i2;
      add_small(i1, i2, &i3);
      ++i1;
    }
    fill_tables(table1, table2, i1, i3);
    update_record(head);
    for (char c = 'A'; c <= glob_char_b; ++c) {
      if (k == classify_char(c, 'C')) {
        k = next_kind(KIND_A);
        strcpy(str_b, "THIRD STRING OF THE PROGRAM..");
        i2 = run;
        glob_int = run;
      }
    }
    i2 = i2 * i1;
    i1 = i2 / i3;
    i2 = 7 * (i2 - i3) - i1;
    bump(&i1);
    head->counter += cmp;
  }

  // Deterministic end state; compare with a host build.
  unsigned h = (unsigned)glob_int * 31u + (unsigned)i1 * 7u + (unsigned)i2 + (unsigned)i3;
  h = h * 31u + (unsigned)head->counter + (unsigned)pool[1].ival + (unsigned)table1[8];
  h = h * 31u + (unsigned)table2[8][7] + (unsigned)k + (unsigned)glob_char_b;
#ifdef HOST
  printf("0x%08xu\n", h);
  return 0;
#else
  return h == EXPECTED_HASH ? 0 : 1;
#endif
}
