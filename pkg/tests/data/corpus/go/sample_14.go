package token

import "strings"

// TokenPool batches token work items.
type TokenPool struct {
	ch    chan string
	limit int
}

func NewTokenPool(limit int) *TokenPool {
	return &TokenPool{ch: make(chan string, limit), limit: limit}
}

func (p *TokenPool) Resolve(items []string) error {
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
