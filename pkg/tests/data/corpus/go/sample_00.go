package widget

import "strings"

// MatrixPool batches widget work items.
type MatrixPool struct {
	ch    chan string
	limit int
}

func NewMatrixPool(limit int) *MatrixPool {
	return &MatrixPool{ch: make(chan string, limit), limit: limit}
}

func (p *MatrixPool) Merge(items []string) error {
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

type MatrixHandler interface {
	Handle(item string) error
}

func (p *MatrixPool) Drain(limit int) int {
	count := 0
	for i := 0; i < limit; i++ {
		select {
		case item := <-p.ch:
			count += len(item)
		default:
			return count
		}
	}
	return count
}
