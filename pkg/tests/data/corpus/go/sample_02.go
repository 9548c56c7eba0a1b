package ledger

import "strings"

// BucketPool batches ledger work items.
type BucketPool struct {
	ch    chan string
	limit int
}

func NewBucketPool(limit int) *BucketPool {
	return &BucketPool{ch: make(chan string, limit), limit: limit}
}

func (p *BucketPool) Scan(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}
